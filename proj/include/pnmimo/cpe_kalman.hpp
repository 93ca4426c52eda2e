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

namespace pnmimo {

/// Per-config constants the tracker needs but cannot derive in closed form.
struct TrackerCalibration {
    double sigma_ici_sq = 0.0; // unit-power ICI variance on one subcarrier
    double cpe_mean_abs = 1.0; // |E theta_{0,0}| for a zero phase origin
};

/// |E theta_{0,0}| over `trials` Monte Carlo windows of the combined UE + BS
/// phase starting at zero. Exactly 1 without phase noise.
double cpe_mean_magnitude(const SystemConfig& config, int trials);

/// sigma_ICI^2 and |E theta_{0,0}|, each computed once per config and cached.
TrackerCalibration calibrate_tracker(const SystemConfig& config);

/// Complex scalar Kalman filters on the CPE coefficient theta_{i,0}:
/// one shared state in CO, one state per antenna in DO.
struct KalmanState {
    std::vector<cd> theta_hat;
    std::vector<double> err_var;
    double rho = 1.0;
    double process_var = 0.0;   // q
    double obs_noise_var = 0.0; // r for extended-training frames
    double sigma_ici_sq = 0.0;
    Scenario scenario = Scenario::CO;
};

/// theta_hat = 1, err_var = 1 - |E theta_{0,0}|^2, rho from ar1_rho, q per
/// config.process_noise, r = noise_var + (P Nc / D) sigma_ICI^2. No randomness.
KalmanState kalman_init(const SystemConfig& config, const TrackerCalibration& calibration);

/// theta_hat <- rho theta_hat, err_var <- rho^2 err_var + q.
KalmanState kalman_predict(KalmanState state);

/// Measurement update from subcarrier 0 of a pilot or training-extension frame.
/// The observation gain at antenna m is sqrt(frame.power) c_0 g_m and the noise
/// variance is frame.noise_var + frame.power * sigma_ICI^2. CO applies the M
/// observations as sequential scalar updates of one state; DO updates each
/// antenna's filter with its own observation.
KalmanState kalman_update(KalmanState state, const ReceivedFrame& frame,
                          std::span<const cd> channel_column0);

/// One extended-training symbol: predict, then update. The frame must be a
/// training-extension frame transmitted at P Nc / D.
KalmanState kalman_step(KalmanState state, const ReceivedFrame& frame,
                        std::span<const cd> channel_column0, const SystemConfig& config);

/// Per-antenna factor applied to the training-time estimate.
/// Relative: theta_D conj(theta_0) / |theta_0|^2.  Absolute: theta_D.
/// CO states (length 1) are broadcast to all antennas.
std::vector<cd> compensation_rotation(std::span<const cd> theta_data, std::span<const cd> theta_pilot,
                                      CompensationForm form, std::size_t n_antennas);

/// g_hat, clean and contamination of antenna m all multiplied by rotation[m].
ChannelEstimate compensate(const ChannelEstimate& estimate, std::span<const cd> rotation);

struct KalmanTraceRow {
    int step = 0; // 0 is the pilot update
    std::size_t state_index = 0;
    cd theta_hat;
    double err_var = 0.0;
};

struct TrackingResult {
    std::vector<cd> theta_pilot; // posterior after the pilot update
    std::vector<cd> theta_final; // posterior after the last extended-training symbol
    KalmanState final_state;
    std::vector<KalmanTraceRow> trace; // filled only when requested
};

/// Pilot update followed by one step per extension frame.
TrackingResult track_cpe(const SystemConfig& config, const TrackerCalibration& calibration,
                         const ReceivedFrame& pilot, std::span<const ReceivedFrame> extension_frames,
                         std::span<const cd> channel_column0, bool record_trace = false);

} // namespace pnmimo
