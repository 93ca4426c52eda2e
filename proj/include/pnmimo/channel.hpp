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

#include "pnmimo/frame.hpp"
#include "pnmimo/matrix.hpp"
#include "pnmimo/rng.hpp"

namespace pnmimo {

/// Frequency-domain channel, antennas x subcarriers, unit-variance CN entries.
/// Held constant over a trial.
struct ChannelRealization {
    CMatrix g;
};

ChannelRealization generate_channel(std::size_t n_antennas, std::size_t n_subcarriers,
                                    RngStream& stream);

/// Pilot-based estimate g_hat = y_pilot (no 1/sqrt(P) scaling), split into the
/// noiseless CPE-rotated channel and the contamination (pilot ICI plus AWGN).
/// g_hat == (clean + ici) + awgn in the pilot frame's summation order.
struct ChannelEstimate {
    CMatrix g_hat;
    CMatrix clean;
    CMatrix contamination;

    std::size_t n_antennas() const { return g_hat.rows(); }
    std::size_t n_subcarriers() const { return g_hat.cols(); }
};

ChannelEstimate pilot_estimate(const ReceivedFrame& pilot_frame);

} // namespace pnmimo
