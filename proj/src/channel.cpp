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

#include "pnmimo/channel.hpp"

#include "pnmimo/config.hpp"

namespace pnmimo {

std::string_view to_string(FrameRole role)
{
    switch (role) {
    case FrameRole::Pilot: return "pilot";
    case FrameRole::Data: return "data";
    case FrameRole::TrainingExtension: return "training-extension";
    }
    return "?";
}

void ReceivedFrame::assemble()
{
    y = CMatrix(signal_part.rows(), signal_part.cols());
    auto& out = y.data();
    const auto& s = signal_part.data();
    const auto& i = ici_part.data();
    const auto& w = awgn_part.data();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (s[k] + i[k]) + w[k];
}

ChannelRealization generate_channel(std::size_t n_antennas, std::size_t n_subcarriers,
                                    RngStream& stream)
{
    if (n_antennas == 0 || n_subcarriers == 0) throw Error("channel dimensions must be positive");
    ChannelRealization ch{CMatrix(n_antennas, n_subcarriers)};
    for (auto& v : ch.g.data()) v = stream.complex_gaussian(1.0);
    return ch;
}

ChannelEstimate pilot_estimate(const ReceivedFrame& frame)
{
    if (frame.role != FrameRole::Pilot) throw Error("pilot_estimate: frame is not a pilot frame");
    ChannelEstimate est;
    est.g_hat = frame.y;
    est.clean = frame.signal_part;
    est.contamination = CMatrix(frame.y.rows(), frame.y.cols());
    auto& c = est.contamination.data();
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = frame.ici_part.data()[k] + frame.awgn_part.data()[k];
    return est;
}

} // namespace pnmimo
