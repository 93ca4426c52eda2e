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
#include "pnmimo/channel.hpp"
#include "pnmimo/ofdm_link.hpp"

using namespace pnmimo;

namespace {

struct Fixture {
    SystemConfig cfg;
    OscillatorBank bank;
    ChannelRealization ch;
    std::vector<int> symbols;
};

Fixture make_fixture(Scenario s, int nc, int m, std::uint64_t seed, double sigma_deg = 2.0)
{
    SystemConfig c;
    c.n_subcarriers = nc;
    c.n_antennas = m;
    c.delay_samples = 4 * nc;
    c.scenario = s;
    c.seed = seed;
    c.sigma_phi_ue_deg = sigma_deg;
    c.sigma_phi_bs_deg = sigma_deg;
    Fixture f;
    f.cfg = validate(c);
    f.bank = generate_oscillators(f.cfg, 0);
    RngStream rng(seed, 0, StreamRole::Channel);
    f.ch = generate_channel(static_cast<std::size_t>(m), static_cast<std::size_t>(nc), rng);
    RngStream sym(seed, 0, StreamRole::Symbols);
    f.symbols = draw_symbols(static_cast<std::size_t>(nc), sym);
    return f;
}

} // namespace

TEST_CASE("fast synthesis equals the materialized matrix oracle")
{
    for (auto s : {Scenario::CO, Scenario::DO})
        for (int nc : {2, 4, 8})
            for (int m : {1, 2, 4})
                for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                    const auto f = make_fixture(s, nc, m, seed, 10.0);
                    const std::size_t w = static_cast<std::size_t>(nc);
                    const auto fast = synthesize_noiseless(f.ch, f.bank, f.symbols, w, f.cfg.power,
                                                           FrameRole::Data);
                    const auto slow = theta_matrix_oracle(f.ch, f.bank, f.symbols, w, f.cfg.power,
                                                          FrameRole::Data);
                    CHECK(test::max_abs_diff(fast.y, slow.y) < 1e-10);
                }
}

TEST_CASE("matrix oracle refuses oversized systems")
{
    const auto f = make_fixture(Scenario::DO, 64, 20, 1);
    CHECK_THROWS_AS(theta_matrix_oracle(f.ch, f.bank, f.symbols, 0, f.cfg.power, FrameRole::Data), Error);
}

TEST_CASE("received frame decomposes into signal, ICI and noise")
{
    const auto f = make_fixture(Scenario::DO, 16, 4, 3);
    RngStream noise(77);
    const auto fr = synthesize_frame(f.cfg, f.ch, f.bank, f.symbols, 16, f.cfg.power,
                                     FrameRole::Data, noise);
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 16; ++n) {
            CHECK(fr.y(m, n) == (fr.signal_part(m, n) + fr.ici_part(m, n)) + fr.awgn_part(m, n));
            CHECK(std::abs(fr.signal_part(m, n) - fr.theta(m, 0) * fr.tx(m, n)) < 1e-15);
            cd leak{};
            for (std::size_t k = 0; k < 16; ++k)
                if (k != n) leak += fr.theta(m, (k + 16 - n) % 16) * fr.tx(m, k);
            CHECK(std::abs(fr.ici_part(m, n) - leak) < 1e-12);
        }
}

TEST_CASE("without phase noise the frame has no ICI")
{
    const auto f = make_fixture(Scenario::CO, 8, 2, 5, 0.0);
    const auto fr = synthesize_noiseless(f.ch, f.bank, f.symbols, 8, f.cfg.power, FrameRole::Data);
    for (const auto& v : fr.ici_part.data()) CHECK(v == cd{});
    CHECK(fr.signal_part == fr.tx);
}

TEST_CASE("synthesis input errors")
{
    const auto f = make_fixture(Scenario::DO, 8, 2, 1);
    const std::vector<int> short_symbols(4, 1);
    CHECK_THROWS_AS(synthesize_noiseless(f.ch, f.bank, short_symbols, 0, 0.1, FrameRole::Data), Error);
    CHECK_THROWS_AS(synthesize_noiseless(f.ch, f.bank, f.symbols, 0, 0.0, FrameRole::Data), Error);
    CHECK_THROWS_AS(synthesize_noiseless(f.ch, f.bank, f.symbols, 10000, 0.1, FrameRole::Data), Error);
}

TEST_CASE("noise scaling and validation")
{
    const auto f = make_fixture(Scenario::DO, 8, 2, 1);
    const auto fr = synthesize_noiseless(f.ch, f.bank, f.symbols, 0, 0.1, FrameRole::Data);
    RngStream rng(4);
    const auto unit = draw_unit_noise(2, 8, rng);
    const auto noisy = with_noise(fr, unit, 0.25);
    CHECK(noisy.noise_var == 0.25);
    for (std::size_t i = 0; i < unit.data().size(); ++i)
        CHECK(noisy.awgn_part.data()[i] == 0.5 * unit.data()[i]);
    CHECK_THROWS_AS(with_noise(fr, unit, -1.0), Error);
    CHECK_THROWS_AS(with_noise(fr, CMatrix(3, 8), 1.0), Error);
}

TEST_CASE("unit noise has unit variance")
{
    RngStream rng(8);
    const auto w = draw_unit_noise(100, 1000, rng);
    double p = 0.0;
    for (const auto& v : w.data()) p += std::norm(v);
    CHECK(p / static_cast<double>(w.data().size()) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("MRC output equals the sum of its three terms")
{
    for (auto s : {Scenario::CO, Scenario::DO})
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto f = make_fixture(s, 16, 8, seed);
            RngStream pn(seed, 0, StreamRole::PilotNoise);
            RngStream dn(seed, 0, StreamRole::DataNoise);
            const std::vector<int> ones(16, 1);
            const auto pilot = synthesize_frame(f.cfg, f.ch, f.bank, ones, 0, f.cfg.power,
                                                FrameRole::Pilot, pn);
            const auto data = synthesize_frame(f.cfg, f.ch, f.bank, f.symbols, 64, f.cfg.power,
                                               FrameRole::Data, dn);
            for (std::size_t n : {0u, 5u}) {
                const auto b = mrc_detect(pilot_estimate(pilot), data, n);
                CHECK(std::abs(b.c_hat - (b.t_sig + b.t_ici + b.t_awgn)) / std::abs(b.c_hat) < 1e-10);
                CHECK(b.snr_inst > 0.0);
            }
        }
}

TEST_CASE("conditional ICI and noise powers match averages over data symbols and noise")
{
    const auto f = make_fixture(Scenario::DO, 8, 4, 12, 6.0);
    RngStream pn(1);
    const std::vector<int> ones(8, 1);
    const auto pilot = synthesize_frame(f.cfg, f.ch, f.bank, ones, 0, f.cfg.power, FrameRole::Pilot, pn);
    const auto est = pilot_estimate(pilot);

    const int draws = 40000;
    RngStream rng(2);
    double ici = 0.0, awgn = 0.0;
    SnrBreakdown ref;
    for (int i = 0; i < draws; ++i) {
        auto symbols = draw_symbols(8, rng);
        symbols[0] = 1;
        const auto data = synthesize_frame(f.cfg, f.ch, f.bank, symbols, 32, f.cfg.power,
                                           FrameRole::Data, rng);
        const auto b = mrc_detect(est, data, 0);
        ici += std::norm(b.t_ici);
        awgn += std::norm(b.t_awgn);
        if (i == 0) ref = b;
    }
    CHECK(ici / draws == doctest::Approx(ref.ici_power).epsilon(0.03));
    CHECK(awgn / draws == doctest::Approx(ref.awgn_power).epsilon(0.03));
}

TEST_CASE("MRC input errors")
{
    const auto f = make_fixture(Scenario::DO, 8, 2, 1);
    const std::vector<int> ones(8, 1);
    const auto pilot = synthesize_noiseless(f.ch, f.bank, ones, 0, 0.1, FrameRole::Pilot);
    const auto data = synthesize_noiseless(f.ch, f.bank, f.symbols, 8, 0.1, FrameRole::Data);
    const auto est = pilot_estimate(pilot);
    CHECK_THROWS_AS(mrc_detect(est, data, 8), Error);
    CHECK_THROWS_AS(mrc_detect(ChannelEstimate{}, data, 0), Error);
}

TEST_CASE("symbols are balanced BPSK")
{
    RngStream rng(6);
    const auto s = draw_symbols(100000, rng);
    long sum = 0;
    for (int v : s) {
        CHECK((v == 1 || v == -1));
        sum += v;
    }
    CHECK(std::abs(static_cast<double>(sum)) < 5.0 * std::sqrt(100000.0));
}
