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

#include "pnmimo/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <istream>
#include <sstream>

namespace pnmimo {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& ch : out)
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    const std::string tmp(trim(text));
    char* end = nullptr;
    errno = 0;
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        value = std::strtod(tmp.c_str(), &end);
    } else if constexpr (std::is_signed_v<T>) {
        const long long v = std::strtoll(tmp.c_str(), &end, 10);
        if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) errno = ERANGE;
        value = static_cast<T>(v);
    } else {
        if (!tmp.empty() && tmp.front() == '-') errno = ERANGE;
        value = static_cast<T>(std::strtoull(tmp.c_str(), &end, 10));
    }
    if (tmp.empty() || errno != 0 || end != tmp.c_str() + tmp.size())
        throw Error("invalid value for '" + std::string(key) + "': '" + tmp + "'");
    return value;
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::string_view to_string(Scenario s) { return s == Scenario::CO ? "CO" : "DO"; }
std::string_view to_string(Compensation c) { return c == Compensation::None ? "none" : "kalman"; }
std::string_view to_string(ProcessNoise p)
{
    return p == ProcessNoise::Stated ? "stated" : "unit-stationary";
}
std::string_view to_string(CompensationForm f)
{
    return f == CompensationForm::Relative ? "relative" : "absolute";
}

Scenario parse_scenario(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "co") return Scenario::CO;
    if (t == "do") return Scenario::DO;
    throw Error("unknown scenario '" + std::string(text) + "' (expected CO or DO)");
}

Compensation parse_compensation(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "none") return Compensation::None;
    if (t == "kalman") return Compensation::Kalman;
    throw Error("unknown compensation '" + std::string(text) + "' (expected none or kalman)");
}

ProcessNoise parse_process_noise(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "stated") return ProcessNoise::Stated;
    if (t == "unit-stationary" || t == "unit") return ProcessNoise::UnitStationary;
    throw Error("unknown process noise model '" + std::string(text) + "'");
}

CompensationForm parse_compensation_form(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "relative") return CompensationForm::Relative;
    if (t == "absolute") return CompensationForm::Absolute;
    throw Error("unknown compensation form '" + std::string(text) + "'");
}

double SystemConfig::training_power() const
{
    return power * static_cast<double>(n_subcarriers) / static_cast<double>(delay_samples);
}

SystemConfig validate(SystemConfig c)
{
    if (c.n_subcarriers <= 0) throw Error("n_subcarriers must be positive");
    if (c.n_antennas <= 0) throw Error("n_antennas must be positive");
    if (!(c.noise_var > 0.0) || !std::isfinite(c.noise_var))
        throw Error("noise_var must be positive");
    if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw Error("alpha must be nonnegative");
    if (!(c.sigma_phi_ue_deg >= 0.0) || !std::isfinite(c.sigma_phi_ue_deg))
        throw Error("sigma_phi_ue_deg must be nonnegative");
    if (!(c.sigma_phi_bs_deg >= 0.0) || !std::isfinite(c.sigma_phi_bs_deg))
        throw Error("sigma_phi_bs_deg must be nonnegative");
    if (c.delay_samples < 0) throw Error("delay_samples must be nonnegative");
    if (c.delay_samples % c.n_subcarriers != 0) throw Error("D must be a multiple of Nc");
    if (c.trials <= 0) throw Error("trials must be positive");
    if (c.ici_trials <= 0) throw Error("ici_trials must be positive");
    if (c.prior_trials <= 0) throw Error("prior_trials must be positive");
    if (c.symbol_duration && !(*c.symbol_duration > 0.0))
        throw Error("symbol_duration must be positive");

    c.power = std::pow(static_cast<double>(c.n_antennas), -c.alpha);
    if (!(c.power > 0.0 && c.power <= 1.0)) throw Error("derived transmit power outside (0, 1]");
    c.sigma_ue_rad = deg_to_rad(c.sigma_phi_ue_deg);
    c.sigma_bs_rad = deg_to_rad(c.sigma_phi_bs_deg);
    c.validated = true;
    return c;
}

void apply_setting(SystemConfig& c, std::string_view raw_key, std::string_view value)
{
    const auto key = lower(trim(raw_key));
    value = trim(value);
    if (key == "n_subcarriers") c.n_subcarriers = parse_number<int>(key, value);
    else if (key == "n_antennas") c.n_antennas = parse_number<int>(key, value);
    else if (key == "alpha") c.alpha = parse_number<double>(key, value);
    else if (key == "sigma_phi_ue_deg") c.sigma_phi_ue_deg = parse_number<double>(key, value);
    else if (key == "sigma_phi_bs_deg") c.sigma_phi_bs_deg = parse_number<double>(key, value);
    else if (key == "delay_samples") c.delay_samples = parse_number<int>(key, value);
    else if (key == "noise_var") c.noise_var = parse_number<double>(key, value);
    else if (key == "scenario") c.scenario = parse_scenario(value);
    else if (key == "compensation") c.compensation = parse_compensation(value);
    else if (key == "trials") c.trials = parse_number<int>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "symbol_duration") c.symbol_duration = parse_number<double>(key, value);
    else if (key == "process_noise") c.process_noise = parse_process_noise(value);
    else if (key == "compensation_form") c.compensation_form = parse_compensation_form(value);
    else if (key == "ici_trials") c.ici_trials = parse_number<int>(key, value);
    else if (key == "prior_trials") c.prior_trials = parse_number<int>(key, value);
    else throw Error("unknown configuration key '" + std::string(raw_key) + "'");
    c.validated = false;
}

SystemConfig parse_config_text(std::istream& in, SystemConfig base, const std::string& origin)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw Error(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        try {
            apply_setting(base, view.substr(0, eq), view.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

SystemConfig load_config_file(const std::string& path, SystemConfig base)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    return parse_config_text(in, std::move(base), path);
}

std::map<std::string, std::string> describe(const SystemConfig& c)
{
    std::map<std::string, std::string> out;
    out["n_subcarriers"] = std::to_string(c.n_subcarriers);
    out["n_antennas"] = std::to_string(c.n_antennas);
    out["alpha"] = format_double(c.alpha);
    out["sigma_phi_ue_deg"] = format_double(c.sigma_phi_ue_deg);
    out["sigma_phi_bs_deg"] = format_double(c.sigma_phi_bs_deg);
    out["delay_samples"] = std::to_string(c.delay_samples);
    out["noise_var"] = format_double(c.noise_var);
    out["scenario"] = std::string(to_string(c.scenario));
    out["compensation"] = std::string(to_string(c.compensation));
    out["trials"] = std::to_string(c.trials);
    out["seed"] = std::to_string(c.seed);
    if (c.symbol_duration) out["symbol_duration"] = format_double(*c.symbol_duration);
    out["process_noise"] = std::string(to_string(c.process_noise));
    out["compensation_form"] = std::string(to_string(c.compensation_form));
    out["ici_trials"] = std::to_string(c.ici_trials);
    out["prior_trials"] = std::to_string(c.prior_trials);
    return out;
}

} // namespace pnmimo
