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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pnmimo/analytic.hpp"
#include "pnmimo/channel.hpp"
#include "pnmimo/config.hpp"
#include "pnmimo/cpe_kalman.hpp"
#include "pnmimo/frame.hpp"
#include "pnmimo/ofdm_link.hpp"
#include "pnmimo/phase_noise.hpp"

namespace pnmimo {

enum class CurveKind { Simulation, Analytic };
std::string_view to_string(CurveKind k);

struct CurvePoint {
    double p_over_sigma_db = 0.0;
    double c_erg = 0.0;
    double std_err = 0.0;
};

struct CapacityCurve {
    std::vector<CurvePoint> points; // sorted by p_over_sigma_db, no duplicates
    Scenario scenario = Scenario::CO;
    Compensation compensation = Compensation::None;
    CurveKind kind = CurveKind::Simulation;
    SystemConfig config_echo;
    std::uint64_t seed = 0;
};

/// -10 dB to +30 dB in 5 dB steps.
std::vector<double> default_grid();

/// "start:stop:step" (inclusive) or a comma-separated list. The result is sorted
/// and must be nonempty without duplicates.
std::vector<double> parse_grid(std::string_view text);

/// Noise variance giving P / noise_var = db.
double noise_var_for_db(const SystemConfig& config, double db);

/// Everything about one trial that does not depend on the noise level: the
/// oscillators, the channel, noiseless frames and unit-variance noise draws.
/// The pilot sits at window 0, extended-training symbols at Nc, 2Nc, ..., D, and
/// the data symbol at D.
struct TrialLink {
    OscillatorBank oscillators;
    ChannelRealization channel;
    ReceivedFrame pilot;
    ReceivedFrame data;
    CMatrix pilot_noise;
    CMatrix data_noise;
    std::vector<ReceivedFrame> extension;
    std::vector<CMatrix> extension_noise;
};

TrialLink prepare_trial(const SystemConfig& config, std::uint64_t trial, bool with_extension);

struct LinkOutcome {
    SnrBreakdown snr;
    ChannelEstimate estimate; // the estimate used for MRC (compensated if tracking ran)
    TrackingResult tracking;  // empty without compensation
};

/// Runs pilot estimation, optional CPE tracking and compensation, and MRC on
/// subcarrier 0 of the data symbol at the given noise level.
/// Sets the noise of every frame in `trial` to `noise_var` in place, then detects.
LinkOutcome run_link(const SystemConfig& config, const TrackerCalibration& calibration,
                     TrialLink& trial, double noise_var, Compensation compensation,
                     bool record_trace = false);

/// Worker threads for trial fan-out: $PNMIMO_WORKERS if set, else the hardware
/// concurrency.
int worker_count();

/// Monte Carlo capacity curve of the full link. For each grid point the noise
/// variance is set to P / 10^(db/10) and config.trials trials are aggregated.
/// Trials reuse their random streams across grid points.
CapacityCurve run_sweep(const SystemConfig& config, const std::vector<double>& db_grid,
                        int workers = worker_count());

/// Capacity from the finite-M large-array SNR formula, one fresh oscillator
/// realization per trial (same phase streams as run_sweep, no symbols, channel
/// or noise draws). The formula models the uncompensated receiver.
CapacityCurve run_analytic_overlay(const SystemConfig& config, const std::vector<double>& db_grid,
                                   int workers = worker_count());

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(std::string_view text);

std::string to_csv(const CapacityCurve& curve);
std::string to_json(const CapacityCurve& curve);

/// Writes the curve; throws with the path in the message on I/O failure.
void emit(const CapacityCurve& curve, const std::string& path, OutputFormat format);

// Debug dumps (CSV).
void write_trace_csv(const PhaseTrace& trace, const std::string& path);
void write_frame_csv(const ReceivedFrame& frame, const std::string& path);
void write_kalman_trace_csv(const std::vector<KalmanTraceRow>& rows, const std::string& path);

} // namespace pnmimo
