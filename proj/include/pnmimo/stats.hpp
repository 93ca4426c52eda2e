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
#include <cstddef>
#include <span>
#include <vector>

namespace pnmimo {

/// Sum with a fixed pairwise split (blocks of 8 summed left to right). The result
/// depends only on the input order, never on how the inputs were produced.
inline double pairwise_sum(std::span<const double> x)
{
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct MeanEstimate {
    double mean = 0.0;
    double std_err = 0.0;
};

/// Sample mean and standard error (n - 1 normalization; 0 for a single sample).
inline MeanEstimate mean_and_stderr(std::span<const double> x)
{
    MeanEstimate out;
    if (x.empty()) return out;
    const double n = static_cast<double>(x.size());
    out.mean = pairwise_sum(x) / n;
    if (x.size() < 2) return out;
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - out.mean) * (x[i] - out.mean);
    out.std_err = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    return out;
}

} // namespace pnmimo
