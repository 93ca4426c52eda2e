// SPDX-License-Identifier: Apache-2.0
//
// pnmimo: phase-noise-aware massive MIMO-OFDM uplink simulator
// Copyright (C) 2026 The pnmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pnmimo/cpe_kalman.hpp"
#include "pnmimo/experiments.hpp"

using namespace pnmimo;

namespace {

ReceivedFrame observation(std::span<const cd> y, double power, double noise_var)
{
    ReceivedFrame f;
    f.role = FrameRole::TrainingExtension;
    f.power = power;
    f.noise_var = noise_var;
    f.symbols = {1};
    f.y = CMatrix(y.size(), 1);
    for (std::size_t m = 0; m < y.size(); ++m) f.y(m, 0) = y[m];
    return f;
}

KalmanState static_state(std::size_t n, Scenario s, double prior)
{
    KalmanState st;
    st.scenario = s;
    st.rho = 1.0;
    st.process_var = 0.0;
    st.theta_hat.assign(n, cd{1.0, 0.0});
    st.err_var.assign(n, prior);
    return st;
}

SystemConfig zero_pn(SystemConfig c)
{
    c.sigma_phi_ue_deg = 0.0;
    c.sigma_phi_bs_deg = 0.0;
    return validate(c);
}

} // namespace

TEST_CASE("init without phase noise is exact and frozen")
{
    const auto c = zero_pn(test::small_config(Scenario::DO));
    const auto cal = calibrate_tracker(c);
    CHECK(cal.sigma_ici_sq == 0.0);
    CHECK(cal.cpe_mean_abs == 1.0);
    const auto st = kalman_init(c, cal);
    CHECK(st.rho == 1.0);
    CHECK(st.process_var == 0.0);
    for (double p : st.err_var) CHECK(p == 0.0);

    auto link = prepare_trial(c, 0, true);
    const auto out = run_link(c, cal, link, 0.5, Compensation::Kalman);
    for (const auto& v : out.tracking.theta_final) CHECK(v == cd{1.0, 0.0});
}

TEST_CASE("init at the reference configuration")
{
    for (auto pn : {ProcessNoise::Stated, ProcessNoise::UnitStationary}) {
        SystemConfig raw;
        raw.process_noise = pn;
        const auto c = validate(raw);
        const auto cal = calibrate_tracker(c);
        const auto st = kalman_init(c, cal);
        CHECK(st.rho == doctest::Approx(0.998782).epsilon(1e-6));
        const double base = 1.0 - st.rho * st.rho;
        CHECK(st.process_var == doctest::Approx(pn == ProcessNoise::Stated ? 64.0 * base : base));
        CHECK(st.obs_noise_var == doctest::Approx(c.noise_var + c.training_power() * cal.sigma_ici_sq));
        CHECK(st.theta_hat.size() == 100);
        CHECK(st.err_var[0] == doctest::Approx(1.0 - cal.cpe_mean_abs * cal.cpe_mean_abs));
        CHECK(st.err_var[0] > 0.0);
        CHECK(st.err_var[0] < 0.1);
        const auto again = kalman_init(c, cal);
        CHECK(again.theta_hat == st.theta_hat);
        CHECK(again.err_var == st.err_var);
    }
    const auto co = validate(SystemConfig{.scenario = Scenario::CO});
    CHECK(kalman_init(co, calibrate_tracker(co)).theta_hat.size() == 1);
}

TEST_CASE("noiseless single step recovers the true CPE")
{
    for (auto s : {Scenario::CO, Scenario::DO}) {
        SystemConfig raw;
        raw.n_subcarriers = 1;
        raw.delay_samples = 1;
        raw.n_antennas = 4;
        raw.scenario = s;
        raw.prior_trials = 100;
        raw.ici_trials = 100;
        const auto c = validate(raw);
        const auto cal = calibrate_tracker(c);
        auto link = prepare_trial(c, 2, true);
        REQUIRE(link.extension.size() == 1);
        set_noise(link.extension[0], link.extension_noise[0], 0.0);
        const auto g0 = link.channel.g.column(0);
        auto st = kalman_init(c, cal);
        st = kalman_step(std::move(st), link.extension[0], g0, c);
        for (std::size_t i = 0; i < st.theta_hat.size(); ++i) {
            const cd truth = link.oscillators.theta(i, 1, 1).values[0];
            CHECK(std::abs(st.theta_hat[i] - truth) < 1e-6);
        }
    }
}

TEST_CASE("static state converges to the batch least-squares posterior")
{
    const std::size_t m = 5;
    const int steps = 12;
    const double power = 0.3, noise = 0.2, prior = 0.5;
    const cd truth = std::polar(0.9, 0.7);
    RngStream rng(31);
    std::vector<cd> h(m);
    for (auto& v : h) v = rng.complex_gaussian(1.0);
    std::vector<ReceivedFrame> frames;
    for (int k = 0; k < steps; ++k) {
        std::vector<cd> y(m);
        for (std::size_t i = 0; i < m; ++i)
            y[i] = std::sqrt(power) * h[i] * truth + rng.complex_gaussian(noise);
        frames.push_back(observation(y, power, noise));
    }

    SUBCASE("shared state")
    {
        auto st = static_state(1, Scenario::CO, prior);
        double info = 1.0 / prior;
        cd weighted = cd{1.0, 0.0} / prior;
        double last = st.err_var[0];
        for (const auto& f : frames) {
            st = kalman_update(std::move(st), f, h);
            CHECK(st.err_var[0] <= last);
            last = st.err_var[0];
            for (std::size_t i = 0; i < m; ++i) {
                const cd hi = std::sqrt(power) * h[i];
                info += std::norm(hi) / noise;
                weighted += std::conj(hi) * f.y(i, 0) / noise;
            }
        }
        CHECK(std::abs(st.theta_hat[0] - weighted / info) < 1e-10);
        CHECK(st.err_var[0] == doctest::Approx(1.0 / info).epsilon(1e-10));
        CHECK(std::abs(st.theta_hat[0] - truth) < 5.0 * std::sqrt(st.err_var[0]));
    }
    SUBCASE("per-antenna states")
    {
        auto st = static_state(m, Scenario::DO, prior);
        for (const auto& f : frames) st = kalman_update(std::move(st), f, h);
        for (std::size_t i = 0; i < m; ++i) {
            const cd hi = std::sqrt(power) * h[i];
            double info = 1.0 / prior;
            cd weighted = cd{1.0, 0.0} / prior;
            for (const auto& f : frames) {
                info += std::norm(hi) / noise;
                weighted += std::conj(hi) * f.y(i, 0) / noise;
            }
            CHECK(std::abs(st.theta_hat[i] - weighted / info) < 1e-10);
            CHECK(st.err_var[i] == doctest::Approx(1.0 / info).epsilon(1e-10));
        }
    }
}

TEST_CASE("prediction applies the AR(1) model")
{
    auto st = static_state(2, Scenario::DO, 0.1);
    st.rho = 0.9;
    st.process_var = 0.05;
    st.theta_hat[1] = {0.0, 1.0};
    const auto p = kalman_predict(st);
    CHECK(p.theta_hat[0] == cd{0.9, 0.0});
    CHECK(std::abs(p.theta_hat[1] - cd{0.0, 0.9}) < 1e-15);
    CHECK(p.err_var[0] == doctest::Approx(0.81 * 0.1 + 0.05));
}

TEST_CASE("step rejects wrong frame role or power")
{
    const auto c = test::small_config(Scenario::DO);
    const auto cal = calibrate_tracker(c);
    auto link = prepare_trial(c, 0, true);
    set_noise(link.extension[0], link.extension_noise[0], 0.1);
    set_noise(link.pilot, link.pilot_noise, 0.1);
    set_noise(link.data, link.data_noise, 0.1);
    const auto g0 = link.channel.g.column(0);
    const auto st = kalman_init(c, cal);
    CHECK_NOTHROW(kalman_step(st, link.extension[0], g0, c));
    CHECK_THROWS_AS(kalman_step(st, link.pilot, g0, c), Error);
    CHECK_THROWS_AS(kalman_step(st, link.data, g0, c), Error);
    CHECK_THROWS_AS(kalman_update(st, link.data, g0), Error);
    auto wrong_power = link.extension[0];
    wrong_power.power *= 2.0;
    CHECK_THROWS_AS(kalman_step(st, wrong_power, g0, c), Error);
    const std::vector<cd> short_g(2);
    CHECK_THROWS_AS(kalman_update(st, link.extension[0], short_g), Error);
}

TEST_CASE("compensation rotation forms")
{
    const std::vector<cd> data{std::polar(0.8, 0.3), std::polar(0.9, -0.2)};
    const std::vector<cd> pilot{std::polar(0.95, 0.1), std::polar(0.5, 0.4)};
    const auto rel = compensation_rotation(data, pilot, CompensationForm::Relative, 2);
    const auto abs = compensation_rotation(data, pilot, CompensationForm::Absolute, 2);
    for (std::size_t m = 0; m < 2; ++m) {
        CHECK(std::abs(rel[m] * pilot[m] - data[m]) < 1e-15);
        CHECK(abs[m] == data[m]);
    }
    const std::vector<cd> shared{std::polar(0.7, 1.0)};
    const auto co = compensation_rotation(shared, shared, CompensationForm::Relative, 3);
    CHECK(co.size() == 3);
    for (const auto& v : co) CHECK(v == cd{1.0, 0.0});
    CHECK_THROWS_AS(compensation_rotation(data, shared, CompensationForm::Relative, 2), Error);
    CHECK_THROWS_AS(compensation_rotation(data, pilot, CompensationForm::Relative, 3), Error);
}

TEST_CASE("unit rotation leaves the estimate unchanged")
{
    const auto c = test::small_config(Scenario::DO);
    auto link = prepare_trial(c, 0, false);
    set_noise(link.pilot, link.pilot_noise, 0.1);
    const auto est = pilot_estimate(link.pilot);
    const std::vector<cd> ones(4, cd{1.0, 0.0});
    const auto same = compensate(est, ones);
    CHECK(same.g_hat == est.g_hat);
    CHECK(same.clean == est.clean);
    CHECK(same.contamination == est.contamination);
    CHECK_THROWS_AS(compensate(est, std::vector<cd>(3)), Error);
}

TEST_CASE("compensated MRC still decomposes exactly")
{
    const auto c = test::small_config(Scenario::DO, 16, 8, 64);
    const auto cal = calibrate_tracker(c);
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto link = prepare_trial(c, t, true);
        const auto out = run_link(c, cal, link, 0.05, Compensation::Kalman);
        const auto& b = out.snr;
        CHECK(std::abs(b.c_hat - (b.t_sig + b.t_ici + b.t_awgn)) / std::abs(b.c_hat) < 1e-10);
    }
}

TEST_CASE("without phase noise the compensated link equals the uncompensated one")
{
    for (auto s : {Scenario::CO, Scenario::DO}) {
        const auto c = zero_pn(test::small_config(s, 16, 8, 64));
        const auto cal = calibrate_tracker(c);
        for (std::uint64_t t = 0; t < 5; ++t) {
            auto a = prepare_trial(c, t, true);
            auto b = prepare_trial(c, t, true);
            const auto plain = run_link(c, cal, a, 0.2, Compensation::None);
            const auto comp = run_link(c, cal, b, 0.2, Compensation::Kalman);
            CHECK(plain.snr.snr_inst == comp.snr.snr_inst);
            CHECK(plain.snr.c_hat == comp.snr.c_hat);
        }
    }
}

TEST_CASE("tracking beats carrying the training CPE forward")
{
    struct Case {
        Scenario scenario;
        double noise_var;
        int trials;
    };
    for (const auto& k : {Case{Scenario::CO, 1.0, 60}, Case{Scenario::DO, 0.01, 40}}) {
        const auto c = validate(SystemConfig{.noise_var = k.noise_var, .scenario = k.scenario});
        const auto cal = calibrate_tracker(c);
        double tracked = 0.0, carried = 0.0;
        for (int t = 0; t < k.trials; ++t) {
            auto link = prepare_trial(c, static_cast<std::uint64_t>(t), true);
            const auto out = run_link(c, cal, link, c.noise_var, Compensation::Kalman);
            for (std::size_t i = 0; i < out.tracking.theta_final.size(); ++i) {
                const cd start = link.oscillators.theta(i, 0, 64).values[0];
                const cd end = link.oscillators.theta(i, 1280, 64).values[0];
                tracked += std::norm(out.tracking.theta_final[i] - end);
                carried += std::norm(start - end);
            }
        }
        CHECK(tracked < carried);
    }
}

TEST_CASE("tracker trace has one row per state and step and stays plausible")
{
    const auto c = test::small_config(Scenario::DO, 16, 8, 64);
    const auto cal = calibrate_tracker(c);
    auto link = prepare_trial(c, 1, true);
    const auto out = run_link(c, cal, link, 0.05, Compensation::Kalman, true);
    CHECK(out.tracking.trace.size() == 8u * 5u);
    for (const auto& row : out.tracking.trace) {
        CHECK(row.err_var >= 0.0);
        CHECK(std::abs(row.theta_hat) <= 1.0 + 3.0 * std::sqrt(row.err_var));
    }
}
