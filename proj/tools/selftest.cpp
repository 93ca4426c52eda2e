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

#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "pnmimo/analytic.hpp"
#include "pnmimo/experiments.hpp"

namespace pnmimo::tools {

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    return worst;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

bool report(std::ostream& out, const char* name, bool ok, double metric)
{
    out << (ok ? "[PASS] " : "[FAIL] ") << name << "  (worst " << metric << ")\n";
    return ok;
}

SystemConfig small_config(int nc, int m, Scenario s, std::uint64_t seed)
{
    SystemConfig c;
    c.n_subcarriers = nc;
    c.n_antennas = m;
    c.delay_samples = 4 * nc;
    c.scenario = s;
    c.seed = seed;
    c.alpha = 0.0;
    return validate(c);
}

} // namespace

bool run_selftest(std::ostream& out)
{
    bool all = true;

    double worst = 0.0;
    for (int nc : {2, 4, 8, 16}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            RngStream rng(seed, 0, StreamRole::Test);
            const auto ue = generate_trace(static_cast<std::size_t>(nc), 0.2, rng);
            const auto bs = generate_trace(static_cast<std::size_t>(nc), 0.2, rng);
            const auto fast = theta_coefficients(ue.samples, bs.samples);
            for (int k = 0; k < nc; ++k) {
                cd direct{};
                for (int t = 0; t < nc; ++t)
                    direct += std::polar(1.0, 2.0 * kPi * t * k / nc + ue.samples[t] + bs.samples[t]);
                direct /= static_cast<double>(nc);
                worst = std::max(worst, std::abs(direct - fast.values[static_cast<std::size_t>(k)]));
            }
        }
    }
    all &= report(out, "theta FFT == direct summation", worst < 1e-12, worst);

    worst = 0.0;
    for (int nc : {2, 4, 8})
        for (int m : {1, 2, 4})
            for (Scenario s : {Scenario::CO, Scenario::DO})
                for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                    auto cfg = small_config(nc, m, s, seed);
                    cfg.sigma_phi_ue_deg = cfg.sigma_phi_bs_deg = 10.0;
                    cfg = validate(cfg);
                    const auto osc = generate_oscillators(cfg, 0);
                    RngStream rng(seed, 0, StreamRole::Channel);
                    const auto ch = generate_channel(static_cast<std::size_t>(m), static_cast<std::size_t>(nc), rng);
                    const auto sym = draw_symbols(static_cast<std::size_t>(nc), rng);
                    const auto fast = synthesize_noiseless(ch, osc, sym, static_cast<std::size_t>(nc), cfg.power, FrameRole::Data);
                    const auto ref = theta_matrix_oracle(ch, osc, sym, static_cast<std::size_t>(nc), cfg.power, FrameRole::Data);
                    worst = std::max({worst, max_abs_diff(fast.y, ref.y),
                                      max_abs_diff(fast.signal_part, ref.signal_part)});
                }
    all &= report(out, "fast synthesis == Theta-matrix oracle", worst < 1e-10, worst);

    worst = 0.0;
    for (int nc : {4, 8, 16})
        for (Scenario s : {Scenario::CO, Scenario::DO})
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                auto cfg = small_config(nc, 4, s, seed);
                const auto osc = generate_oscillators(cfg, 0);
                const auto fast = pn_terms(osc.ue, osc.bs, cfg);
                const auto ref = pn_terms_quadruple_sum(osc.ue, osc.bs, cfg);
                worst = std::max({worst, rel(fast.pn1, ref.pn1), rel(fast.pn2, ref.pn2),
                                  rel(fast.pn3, ref.pn3), rel(fast.pn4, ref.pn4), rel(fast.pn5, ref.pn5)});
            }
    all &= report(out, "factorized PN terms == quadruple sums", worst < 1e-10, worst);

    worst = 0.0;
    for (Scenario s : {Scenario::CO, Scenario::DO})
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            SystemConfig cfg;
            cfg.n_subcarriers = 16;
            cfg.n_antennas = 8;
            cfg.delay_samples = 64;
            cfg.scenario = s;
            cfg.seed = seed;
            cfg = validate(cfg);
            auto link = prepare_trial(cfg, 0, false);
            const auto outcome = run_link(cfg, {}, link, 0.1, Compensation::None);
            const auto& b = outcome.snr;
            worst = std::max(worst, std::abs(b.c_hat - (b.t_sig + b.t_ici + b.t_awgn)) / std::abs(b.c_hat));
        }
    all &= report(out, "MRC sum identity", worst < 1e-10, worst);

    out << (all ? "selftest: all checks passed\n" : "selftest: FAILED\n");
    return all;
}

} // namespace pnmimo::tools
