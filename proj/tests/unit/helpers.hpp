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


#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "pnmimo/config.hpp"
#include "pnmimo/matrix.hpp"
#include "pnmimo/phase_noise.hpp"

namespace pnmimo::test {

/// Small, fast configuration; validated.
inline SystemConfig small_config(Scenario scenario = Scenario::DO, int nc = 8, int m = 4, int d = 32)
{
    SystemConfig c;
    c.n_subcarriers = nc;
    c.n_antennas = m;
    c.delay_samples = d;
    c.scenario = scenario;
    c.trials = 50;
    c.ici_trials = 2000;
    c.prior_trials = 2000;
    return validate(c);
}

/// theta_k = (1/Nc) sum_t e^{j 2 pi t k / Nc} e^{j psi_t}, summed directly.
inline std::vector<cd> theta_direct(const std::vector<double>& psi)
{
    const std::size_t nc = psi.size();
    std::vector<cd> out(nc);
    for (std::size_t k = 0; k < nc; ++k) {
        cd acc{};
        for (std::size_t t = 0; t < nc; ++t)
            acc += std::polar(1.0, 2.0 * kPi * static_cast<double>(t * k) / static_cast<double>(nc) + psi[t]);
        out[k] = acc / static_cast<double>(nc);
    }
    return out;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

} // namespace pnmimo::test
