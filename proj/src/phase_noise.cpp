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

#include "pnmimo/phase_noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnmimo/fft.hpp"

namespace pnmimo {

std::span<const double> PhaseTrace::segment(std::size_t start, std::size_t length) const
{
    if (start + length > samples.size())
        throw Error("phase trace too short: need samples up to " + std::to_string(start + length) +
                    ", have " + std::to_string(samples.size()));
    return {samples.data() + start, length};
}

PhaseTrace generate_trace(std::size_t length, double increment_std, RngStream& stream,
                          double initial_phase)
{
    if (length == 0) throw Error("phase trace length must be at least 1");
    if (!(increment_std >= 0.0)) throw Error("phase increment std must be nonnegative");

    PhaseTrace trace;
    trace.increment_var = increment_std * increment_std;
    trace.samples.resize(length);
    trace.samples[0] = initial_phase;
    if (increment_std == 0.0) {
        std::fill(trace.samples.begin() + 1, trace.samples.end(), initial_phase);
        return trace;
    }
    for (std::size_t j = 1; j < length; ++j)
        trace.samples[j] = trace.samples[j - 1] + increment_std * stream.gaussian();
    return trace;
}

cd ThetaCoefficients::at_offset(long offset) const
{
    const long n = static_cast<long>(values.size());
    long k = offset % n;
    if (k < 0) k += n;
    return values[static_cast<std::size_t>(k)];
}

ThetaCoefficients theta_coefficients(std::span<const double> ue, std::span<const double> bs)
{
    if (ue.size() != bs.size()) throw Error("theta_coefficients: segment lengths differ");
    if (ue.empty()) throw Error("theta_coefficients: empty segment");
    const std::size_t nc = ue.size();

    ThetaCoefficients out;
    out.values.assign(nc, cd{0.0, 0.0});

    bool phase_free = true;
    for (std::size_t t = 0; t < nc && phase_free; ++t) phase_free = (ue[t] + bs[t]) == 0.0;
    if (phase_free) {
        out.values[0] = 1.0;
        return out;
    }

    std::vector<cd> rot(nc);
    for (std::size_t t = 0; t < nc; ++t) rot[t] = std::polar(1.0, ue[t] + bs[t]);
    fft::backward(rot, out.values);
    const double scale = 1.0 / static_cast<double>(nc);
    for (auto& v : out.values) v *= scale;
    return out;
}

double ar1_rho(double ue_increment_var, double bs_increment_var)
{
    if (ue_increment_var < 0.0 || bs_increment_var < 0.0)
        throw Error("ar1_rho: increment variances must be nonnegative");
    return std::exp(-0.5 * (ue_increment_var + bs_increment_var));
}

ThetaCoefficients OscillatorBank::theta(std::size_t antenna, std::size_t window_start,
                                        std::size_t n_subcarriers) const
{
    return theta_coefficients(ue.segment(window_start, n_subcarriers),
                              bs_for(antenna).segment(window_start, n_subcarriers));
}

OscillatorBank generate_oscillators(const SystemConfig& config, std::uint64_t trial)
{
    const auto length = static_cast<std::size_t>(config.trace_length());
    OscillatorBank bank;
    bank.scenario = config.scenario;
    bank.n_antennas = static_cast<std::size_t>(config.n_antennas);

    RngStream ue_stream(config.seed, trial, StreamRole::UePhase);
    bank.ue = generate_trace(length, config.sigma_ue_rad, ue_stream);

    const std::size_t n_bs = config.scenario == Scenario::CO ? 1 : bank.n_antennas;
    bank.bs.reserve(n_bs);
    for (std::size_t m = 0; m < n_bs; ++m) {
        RngStream bs_stream(config.seed, trial, StreamRole::BsPhase, m);
        bank.bs.push_back(generate_trace(length, config.sigma_bs_rad, bs_stream));
    }
    return bank;
}

} // namespace pnmimo
