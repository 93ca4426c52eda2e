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
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pnmimo {

/// Raised for every invalid parameter, malformed input file or violated
/// precondition in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scenario { CO, DO };
enum class Compensation { None, Kalman };

/// Variance of the AR(1) state noise used by the CPE tracker.
/// `Stated` is Nc(1 - rho^2); `UnitStationary` is 1 - rho^2.
enum class ProcessNoise { Stated, UnitStationary };

/// How the tracked CPE is applied to the training-time channel estimate.
/// `Relative` rotates by theta_D * conj(theta_0) / |theta_0|^2, `Absolute`
/// multiplies by theta_D directly.
enum class CompensationForm { Relative, Absolute };

std::string_view to_string(Scenario s);
std::string_view to_string(Compensation c);
std::string_view to_string(ProcessNoise p);
std::string_view to_string(CompensationForm f);
Scenario parse_scenario(std::string_view text);
Compensation parse_compensation(std::string_view text);
ProcessNoise parse_process_noise(std::string_view text);
CompensationForm parse_compensation_form(std::string_view text);

constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

struct SystemConfig {
    int n_subcarriers = 64;
    int n_antennas = 100;
    double alpha = 0.5;
    double sigma_phi_ue_deg = 2.0;
    double sigma_phi_bs_deg = 2.0;
    int delay_samples = 1280;
    double noise_var = 1.0;
    Scenario scenario = Scenario::DO;
    Compensation compensation = Compensation::None;
    int trials = 2000;
    std::uint64_t seed = 1;
    std::optional<double> symbol_duration; // metadata only

    // Tracker and calibration knobs.
    ProcessNoise process_noise = ProcessNoise::Stated;
    CompensationForm compensation_form = CompensationForm::Relative;
    int ici_trials = 100000;
    int prior_trials = 20000;

    // Derived by validate(); never set these by hand.
    double power = 0.0;
    double sigma_ue_rad = 0.0;
    double sigma_bs_rad = 0.0;
    bool validated = false;

    double ue_increment_var() const { return sigma_ue_rad * sigma_ue_rad; }
    double bs_increment_var() const { return sigma_bs_rad * sigma_bs_rad; }
    bool phase_noise_free() const { return sigma_ue_rad == 0.0 && sigma_bs_rad == 0.0; }
    /// Number of extended-training OFDM symbols, D / Nc.
    int training_symbols() const { return delay_samples / n_subcarriers; }
    /// Per-subcarrier power during the extended training, P * Nc / D.
    double training_power() const;
    /// Samples every oscillator trace must cover: pilot window through data window.
    int trace_length() const { return delay_samples + n_subcarriers; }

    bool operator==(const SystemConfig&) const = default;
};

/// Checks every invariant and fills the derived fields. Idempotent.
SystemConfig validate(SystemConfig config);

/// Applies `key = value` pairs. Keys are the SystemConfig field names.
void apply_setting(SystemConfig& config, std::string_view key, std::string_view value);

/// Reads a flat `key = value` file; `#` starts a comment, blank lines are ignored.
SystemConfig load_config_file(const std::string& path, SystemConfig base = {});
SystemConfig parse_config_text(std::istream& in, SystemConfig base = {},
                               const std::string& origin = "<stream>");

/// Field name -> textual value, in a fixed order. Used for the run manifest.
std::map<std::string, std::string> describe(const SystemConfig& config);

} // namespace pnmimo
