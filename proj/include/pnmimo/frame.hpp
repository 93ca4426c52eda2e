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

#include <cstddef>
#include <string_view>
#include <vector>

#include "pnmimo/matrix.hpp"

namespace pnmimo {

enum class FrameRole { Pilot, Data, TrainingExtension };

std::string_view to_string(FrameRole role);

/// One received OFDM symbol at all antennas, with the ground truth it was
/// built from. Matrices are antennas x subcarriers.
struct ReceivedFrame {
    FrameRole role = FrameRole::Data;
    std::size_t window_start = 0;
    double power = 0.0;     // per-subcarrier transmit power of this symbol
    double noise_var = 0.0; // AWGN variance per subcarrier per antenna
    std::vector<int> symbols;

    CMatrix y;
    CMatrix signal_part; // sqrt(power) theta_0 g c: the CPE-rotated desired term
    CMatrix ici_part;    // leakage from all other subcarriers
    CMatrix awgn_part;

    CMatrix theta; // theta(m, k): Fourier coefficient with offset k for antenna m
    CMatrix tx;    // sqrt(power) g(m, k) c_k before phase noise

    std::size_t n_antennas() const { return y.rows(); }
    std::size_t n_subcarriers() const { return y.cols(); }

    /// Recomputes y from the stored parts, as (signal + ici) + awgn.
    void assemble();
};

} // namespace pnmimo
