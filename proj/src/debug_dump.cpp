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

#include <cstdio>
#include <fstream>

#include "pnmimo/experiments.hpp"

namespace pnmimo {

namespace {

std::ofstream open_csv(const std::string& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out.precision(17);
    return out;
}

} // namespace

void write_trace_csv(const PhaseTrace& trace, const std::string& path)
{
    auto out = open_csv(path);
    out << "sample,phase_rad\n";
    for (std::size_t j = 0; j < trace.samples.size(); ++j) out << j << ',' << trace.samples[j] << '\n';
    if (!out) throw Error("write to '" + path + "' failed");
}

void write_frame_csv(const ReceivedFrame& frame, const std::string& path)
{
    auto out = open_csv(path);
    out << "antenna,subcarrier,y_re,y_im,signal_re,signal_im,ici_re,ici_im,awgn_re,awgn_im\n";
    for (std::size_t m = 0; m < frame.n_antennas(); ++m)
        for (std::size_t n = 0; n < frame.n_subcarriers(); ++n)
            out << m << ',' << n << ',' << frame.y(m, n).real() << ',' << frame.y(m, n).imag() << ','
                << frame.signal_part(m, n).real() << ',' << frame.signal_part(m, n).imag() << ','
                << frame.ici_part(m, n).real() << ',' << frame.ici_part(m, n).imag() << ','
                << frame.awgn_part(m, n).real() << ',' << frame.awgn_part(m, n).imag() << '\n';
    if (!out) throw Error("write to '" + path + "' failed");
}

void write_kalman_trace_csv(const std::vector<KalmanTraceRow>& rows, const std::string& path)
{
    auto out = open_csv(path);
    out << "step,state,theta_re,theta_im,err_var\n";
    for (const auto& r : rows)
        out << r.step << ',' << r.state_index << ',' << r.theta_hat.real() << ',' << r.theta_hat.imag()
            << ',' << r.err_var << '\n';
    if (!out) throw Error("write to '" + path + "' failed");
}

} // namespace pnmimo
