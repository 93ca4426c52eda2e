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
#include <cstdint>
#include <span>
#include <vector>

#include "pnmimo/config.hpp"
#include "pnmimo/matrix.hpp"
#include "pnmimo/rng.hpp"

namespace pnmimo {

/// A realized discrete Wiener phase path for one oscillator, in radians.
struct PhaseTrace {
    std::vector<double> samples;
    double increment_var = 0.0;

    std::size_t size() const { return samples.size(); }
    /// Samples [start, start + length). Throws if the trace is too short.
    std::span<const double> segment(std::size_t start, std::size_t length) const;
};

/// Wiener path phi[j] = phi[j-1] + N(0, increment_std^2) with phi[0] = initial_phase.
PhaseTrace generate_trace(std::size_t length, double increment_std, RngStream& stream,
                          double initial_phase = 0.0);

/// Fourier coefficients of exp(j(ue + bs)) over one OFDM symbol:
///   values[n] = (1/Nc) sum_t exp(j 2 pi t n / Nc) exp(j(ue[t] + bs[t])).
/// Entry n is the coefficient with subcarrier offset n (mod Nc).
struct ThetaCoefficients {
    std::vector<cd> values;

    /// Coefficient for a signed offset, taken modulo Nc.
    cd at_offset(long offset) const;
};

ThetaCoefficients theta_coefficients(std::span<const double> ue, std::span<const double> bs);

/// AR(1) coefficient exp(-(ue_var + bs_var) / 2) of the CPE model.
double ar1_rho(double ue_increment_var, double bs_increment_var);

/// All oscillators of one trial: one UE trace and either a single shared BS
/// trace (CO) or one trace per antenna (DO).
struct OscillatorBank {
    Scenario scenario = Scenario::CO;
    PhaseTrace ue;
    std::vector<PhaseTrace> bs;

    std::size_t n_antennas = 0;
    const PhaseTrace& bs_for(std::size_t antenna) const
    {
        return scenario == Scenario::CO ? bs.front() : bs.at(antenna);
    }
    ThetaCoefficients theta(std::size_t antenna, std::size_t window_start,
                            std::size_t n_subcarriers) const;
};

/// Draws the trial's oscillators from the (seed, trial, UePhase/BsPhase, index) streams.
/// Traces cover config.trace_length() samples.
OscillatorBank generate_oscillators(const SystemConfig& config, std::uint64_t trial);

} // namespace pnmimo
