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
#include <span>
#include <string_view>

#include "pnmimo/config.hpp"
#include "pnmimo/phase_noise.hpp"

namespace pnmimo {

/// Phase-noise factors of the large-M SNR for one realization of the UE
/// oscillator (and, in CO, of the shared BS oscillator). In DO the BS phases are
/// averaged in closed form through exp(-sigma_bs^2 |dt| / 2).
///
///   pn1: E_bs[|theta_{0,0}|^2 |theta_{D,0}|^2]       desired power, diagonal terms
///   pn2: |E_bs[conj(theta_{0,0}) theta_{D,0}]|^2     desired power, coherent terms
///   pn3: E_bs[|theta_{0,0}|^2 sum_{k!=0} |theta_{D,k}|^2]  ICI
///   pn4: E_bs[|theta_{0,0}|^2]                       AWGN through the pilot
///   pn5: E_bs[sum_k |theta_{D,k}|^2] = 1             pilot contamination through data
struct PnTerms {
    double pn1 = 0.0;
    double pn2 = 0.0;
    double pn3 = 0.0;
    double pn4 = 0.0;
    double pn5 = 0.0;
    Scenario scenario = Scenario::CO;
};

/// O(Nc^2) evaluation. Traces must cover [0, Nc) and [D, D + Nc); `bs` needs at
/// least one trace in CO and is ignored in DO.
PnTerms pn_terms(const PhaseTrace& ue, std::span<const PhaseTrace> bs, const SystemConfig& config);

/// Literal four-index sums (two-index for pn4, three-index for pn5), Nc <= 16 only.
PnTerms pn_terms_quadruple_sum(const PhaseTrace& ue, std::span<const PhaseTrace> bs,
                               const SystemConfig& config);

inline constexpr int kQuadrupleSumMaxSubcarriers = 16;

/// Unit-power variance of the ICI on subcarrier 0, E|sum_{k!=0} theta_k g_k c_k|^2,
/// by Monte Carlo over phase noise, channel and symbols. Deterministic in config.seed.
double ici_variance(const SystemConfig& config, int trials);

/// ici_variance(config, config.ici_trials), computed once per distinct
/// (Nc, sigmas, trials, seed) and cached for the process lifetime.
double ici_variance_cached(const SystemConfig& config);

enum class SnrRegime { Vanishing, Finite, Unbounded };
std::string_view to_string(SnrRegime r);

struct AsymptoticSnr {
    double snr = 0.0;
    SnrRegime regime = SnrRegime::Finite;
    double sigma_ici_sq = 0.0;
    /// M -> infinity value: 0, pn2 / noise_var^2, or +inf.
    double limit = 0.0;
};

SnrRegime classify_regime(double alpha);

/// Finite-M ratio with all numerator and denominator terms:
///   num = 2 pn1 / M^(2a-1) + pn2 / M^(2a-2)
///   den = pn3 / M^(2a-1) + pn4 s2 / M^(a-1) + M s2^2 + sici s2 / M^(a-1)
///         + s2 pn5 / M^(a-1) + sici pn5 / M^(2a-1)
/// with s2 the noise variance and sici the unit-power ICI variance.
double snr_ratio(const PnTerms& pn, double sigma_ici_sq, double n_antennas, double alpha,
                 double noise_var);

AsymptoticSnr asymptotic_snr(const PnTerms& pn, double sigma_ici_sq, const SystemConfig& config);

struct CapacityEstimate {
    double c_erg = 0.0;   // bits/s/Hz per subcarrier
    double std_err = 0.0;
};

/// Sample mean of log2(1 + snr) and its standard error.
CapacityEstimate ergodic_capacity(std::span<const double> snr_samples);

} // namespace pnmimo
