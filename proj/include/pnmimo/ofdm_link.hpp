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
#include <vector>

#include "pnmimo/channel.hpp"
#include "pnmimo/config.hpp"
#include "pnmimo/frame.hpp"
#include "pnmimo/phase_noise.hpp"
#include "pnmimo/rng.hpp"

namespace pnmimo {

/// Largest M * Nc for which theta_matrix_oracle materializes the block matrix.
inline constexpr std::size_t kOracleMaxDimension = 1024;

/// Builds the noiseless part of a received OFDM symbol whose window starts at
/// `window_start`. Per antenna the frequency-domain symbols sqrt(power) g c are
/// taken to the time domain, rotated by exp(j(phi + varphi_m)), and taken back.
/// awgn_part is zero and y equals signal + ici.
ReceivedFrame synthesize_noiseless(const ChannelRealization& channel, const OscillatorBank& oscillators,
                                   std::span<const int> symbols, std::size_t window_start,
                                   double power, FrameRole role);

/// M x Nc matrix of unit-variance CN(0, 1) draws.
CMatrix draw_unit_noise(std::size_t n_antennas, std::size_t n_subcarriers, RngStream& stream);

/// Sets awgn_part = sqrt(noise_var) * unit_noise in place and reassembles y.
void set_noise(ReceivedFrame& frame, const CMatrix& unit_noise, double noise_var);

/// Returns `frame` with awgn_part = sqrt(noise_var) * unit_noise and y reassembled.
ReceivedFrame with_noise(ReceivedFrame frame, const CMatrix& unit_noise, double noise_var);

/// Full synthesis: noiseless part plus CN(0, config.noise_var) noise drawn from `noise`.
ReceivedFrame synthesize_frame(const SystemConfig& config, const ChannelRealization& channel,
                               const OscillatorBank& oscillators, std::span<const int> symbols,
                               std::size_t window_start, double power, FrameRole role,
                               RngStream& noise);

/// Reference for synthesize_noiseless: materializes the (M Nc) x (M Nc) phase-noise
/// matrix with blocks diag(theta^(1)_{k}, ..., theta^(M)_{k}), k = col - row, and the
/// (M Nc) x Nc block-diagonal channel, computes the coefficients by direct summation
/// and multiplies sqrt(power) * Theta * G * c. No FFT is involved.
ReceivedFrame theta_matrix_oracle(const ChannelRealization& channel, const OscillatorBank& oscillators,
                                  std::span<const int> symbols, std::size_t window_start,
                                  double power, FrameRole role);

/// MRC output for one subcarrier, split as c_hat = t_sig + t_ici + t_awgn.
///
/// With g_hat = a + w~ (a: noiseless CPE-rotated pilot, w~: pilot ICI + AWGN) and
/// y = s + i + w on the data symbol:
///   t_sig  = a^H s,  t_ici = a^H i,  t_awgn = a^H w + w~^H y.
///
/// The powers are |t_sig|^2 and the expectations of |t_ici|^2 and |t_awgn|^2 over the
/// data-time AWGN and the interfering data symbols, given channel, phase noise and
/// the realized pilot. snr_inst is sig_power / (ici_power + awgn_power);
/// snr_realized uses the realized |t_ici|^2 + |t_awgn|^2 instead.
struct SnrBreakdown {
    cd c_hat;
    cd t_sig;
    cd t_ici;
    cd t_awgn;
    double sig_power = 0.0;
    double ici_power = 0.0;
    double awgn_power = 0.0;
    double snr_inst = 0.0;
    double snr_realized = 0.0;
};

SnrBreakdown mrc_detect(const ChannelEstimate& estimate, const ReceivedFrame& data,
                        std::size_t subcarrier = 0);

/// Draws Nc i.i.d. uniform BPSK symbols.
std::vector<int> draw_symbols(std::size_t n_subcarriers, RngStream& stream);

} // namespace pnmimo
