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

#include "pnmimo/cpe_kalman.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "pnmimo/analytic.hpp"
#include "pnmimo/phase_noise.hpp"
#include "pnmimo/rng.hpp"
#include "pnmimo/stats.hpp"

namespace pnmimo {

namespace {

void scalar_update(cd& theta, double& p, cd h, cd y, double r)
{
    const double s = std::norm(h) * p + r;
    if (!(s > 0.0)) return;
    const cd gain = p * std::conj(h) / s;
    theta += gain * (y - h * theta);
    p = p * r / s;
}

} // namespace

double cpe_mean_magnitude(const SystemConfig& config, int trials)
{
    if (trials < 1) throw Error("cpe_mean_magnitude: trials must be at least 1");
    if (config.phase_noise_free()) return 1.0;
    const auto nc = static_cast<std::size_t>(config.n_subcarriers);
    std::vector<double> re(static_cast<std::size_t>(trials)), im(re.size());
    for (int t = 0; t < trials; ++t) {
        RngStream rng(config.seed, static_cast<std::uint64_t>(t), StreamRole::PriorCalibration);
        const auto ue = generate_trace(nc, config.sigma_ue_rad, rng);
        const auto bs = generate_trace(nc, config.sigma_bs_rad, rng);
        const cd th = theta_coefficients(ue.samples, bs.samples).values[0];
        re[static_cast<std::size_t>(t)] = th.real();
        im[static_cast<std::size_t>(t)] = th.imag();
    }
    return std::abs(cd{mean_and_stderr(re).mean, mean_and_stderr(im).mean});
}

TrackerCalibration calibrate_tracker(const SystemConfig& config)
{
    using Key = std::tuple<int, double, double, int, std::uint64_t>;
    static std::mutex mutex;
    static std::map<Key, double> prior_cache;

    TrackerCalibration cal;
    cal.sigma_ici_sq = ici_variance_cached(config);
    const Key key{config.n_subcarriers, config.sigma_ue_rad, config.sigma_bs_rad, config.prior_trials,
                  config.seed};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = prior_cache.find(key);
    if (it == prior_cache.end())
        it = prior_cache.emplace(key, cpe_mean_magnitude(config, config.prior_trials)).first;
    cal.cpe_mean_abs = it->second;
    return cal;
}

KalmanState kalman_init(const SystemConfig& config, const TrackerCalibration& cal)
{
    KalmanState st;
    st.scenario = config.scenario;
    const std::size_t n = config.scenario == Scenario::CO ? 1 : static_cast<std::size_t>(config.n_antennas);
    st.rho = ar1_rho(config.ue_increment_var(), config.bs_increment_var());
    const double one_minus = 1.0 - st.rho * st.rho;
    st.process_var = config.process_noise == ProcessNoise::Stated
                         ? static_cast<double>(config.n_subcarriers) * one_minus
                         : one_minus;
    st.sigma_ici_sq = cal.sigma_ici_sq;
    st.obs_noise_var = config.noise_var + config.training_power() * cal.sigma_ici_sq;
    const double prior = std::max(0.0, 1.0 - cal.cpe_mean_abs * cal.cpe_mean_abs);
    st.theta_hat.assign(n, cd{1.0, 0.0});
    st.err_var.assign(n, prior);
    return st;
}

KalmanState kalman_predict(KalmanState st)
{
    for (std::size_t i = 0; i < st.theta_hat.size(); ++i) {
        st.theta_hat[i] *= st.rho;
        st.err_var[i] = st.rho * st.rho * st.err_var[i] + st.process_var;
    }
    return st;
}

KalmanState kalman_update(KalmanState st, const ReceivedFrame& frame, std::span<const cd> g0)
{
    if (frame.role != FrameRole::Pilot && frame.role != FrameRole::TrainingExtension)
        throw Error("kalman_update: frame role '" + std::string(to_string(frame.role)) +
                    "' carries no known symbol");
    const std::size_t m_count = frame.n_antennas();
    if (g0.size() != m_count) throw Error("kalman_update: channel column has wrong length");
    if (st.scenario == Scenario::DO && st.theta_hat.size() != m_count)
        throw Error("kalman_update: DO state length differs from antenna count");

    const double r = frame.noise_var + frame.power * st.sigma_ici_sq;
    const double gain = std::sqrt(frame.power) * static_cast<double>(frame.symbols.at(0));
    for (std::size_t m = 0; m < m_count; ++m) {
        const std::size_t s = st.scenario == Scenario::CO ? 0 : m;
        scalar_update(st.theta_hat[s], st.err_var[s], gain * g0[m], frame.y(m, 0), r);
    }
    return st;
}

KalmanState kalman_step(KalmanState st, const ReceivedFrame& frame, std::span<const cd> g0,
                        const SystemConfig& config)
{
    if (frame.role != FrameRole::TrainingExtension)
        throw Error("kalman_step: expected a training-extension frame, got '" +
                    std::string(to_string(frame.role)) + "'");
    const double expected = config.training_power();
    if (std::abs(frame.power - expected) > 1e-12 * expected)
        throw Error("kalman_step: frame power " + std::to_string(frame.power) +
                    " is not the extended-training power " + std::to_string(expected));
    return kalman_update(kalman_predict(std::move(st)), frame, g0);
}

std::vector<cd> compensation_rotation(std::span<const cd> theta_data, std::span<const cd> theta_pilot,
                                      CompensationForm form, std::size_t n_antennas)
{
    if (theta_data.size() != theta_pilot.size() || theta_data.empty())
        throw Error("compensation_rotation: state lengths differ");
    if (theta_data.size() != 1 && theta_data.size() != n_antennas)
        throw Error("compensation_rotation: state length matches neither CO nor DO");
    std::vector<cd> rot(n_antennas);
    for (std::size_t m = 0; m < n_antennas; ++m) {
        const std::size_t s = theta_data.size() == 1 ? 0 : m;
        const cd d = theta_data[s];
        const cd p = theta_pilot[s];
        if (form == CompensationForm::Absolute || std::norm(p) == 0.0) {
            rot[m] = d;
        } else if (d == p) {
            rot[m] = 1.0;
        } else {
            rot[m] = d * std::conj(p) / std::norm(p);
        }
    }
    return rot;
}

ChannelEstimate compensate(const ChannelEstimate& est, std::span<const cd> rotation)
{
    if (rotation.size() != est.n_antennas()) throw Error("compensate: rotation length mismatch");
    ChannelEstimate out = est;
    for (std::size_t m = 0; m < rotation.size(); ++m) {
        const cd k = rotation[m];
        if (k == cd{1.0, 0.0}) continue;
        for (std::size_t n = 0; n < est.n_subcarriers(); ++n) {
            out.g_hat(m, n) *= k;
            out.clean(m, n) *= k;
            out.contamination(m, n) *= k;
        }
    }
    return out;
}

TrackingResult track_cpe(const SystemConfig& config, const TrackerCalibration& cal,
                         const ReceivedFrame& pilot, std::span<const ReceivedFrame> extension,
                         std::span<const cd> g0, bool record_trace)
{
    TrackingResult out;
    auto record = [&](int step, const KalmanState& st) {
        if (!record_trace) return;
        for (std::size_t i = 0; i < st.theta_hat.size(); ++i)
            out.trace.push_back({step, i, st.theta_hat[i], st.err_var[i]});
    };

    KalmanState st = kalman_update(kalman_init(config, cal), pilot, g0);
    out.theta_pilot = st.theta_hat;
    record(0, st);
    int step = 0;
    for (const auto& frame : extension) {
        st = kalman_step(std::move(st), frame, g0, config);
        record(++step, st);
    }
    out.theta_final = st.theta_hat;
    out.final_state = std::move(st);
    return out;
}

} // namespace pnmimo
