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
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pnmimo/experiments.hpp"
#include "selftest.hpp"

namespace {

using namespace pnmimo;

const std::vector<std::string> kConfigKeys = {
    "n_subcarriers", "n_antennas", "alpha",      "sigma_phi_ue_deg", "sigma_phi_bs_deg",
    "delay_samples", "noise_var",  "scenario",   "compensation",     "trials",
    "seed",          "symbol_duration", "process_noise", "compensation_form", "ici_trials",
    "prior_trials",
};

struct ConfigFlags {
    std::string config_file;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App* app)
    {
        app->add_option("--config", config_file, "key = value configuration file");
        for (const auto& key : kConfigKeys)
            app->add_option_function<std::string>(
                "--" + key, [this, key](const std::string& v) { overrides[key] = v; },
                "override '" + key + "'");
    }

    SystemConfig resolve() const
    {
        SystemConfig c;
        if (!config_file.empty()) c = load_config_file(config_file, c);
        // Stable order: map iteration is sorted by key.
        for (const auto& [key, value] : overrides) apply_setting(c, key, value);
        return validate(c);
    }
};

void write_or_print(const CapacityCurve& curve, const std::string& out, const std::string& format)
{
    const auto fmt = parse_format(format);
    if (out.empty() || out == "-") {
        std::cout << (fmt == OutputFormat::Csv ? to_csv(curve) : to_json(curve));
        return;
    }
    emit(curve, out, fmt);
}

void dump_first_trial(const SystemConfig& config, double db, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    const bool track = config.compensation == Compensation::Kalman;
    auto link = prepare_trial(config, 0, track);
    const auto cal = track ? calibrate_tracker(config) : TrackerCalibration{};
    const double nv = noise_var_for_db(config, db);
    const auto outcome = run_link(config, cal, link, nv, config.compensation, true);
    write_trace_csv(link.oscillators.ue, dir + "/trace_ue.csv");
    write_trace_csv(link.oscillators.bs.front(), dir + "/trace_bs0.csv");
    write_frame_csv(link.pilot, dir + "/frame_pilot.csv");
    write_frame_csv(link.data, dir + "/frame_data.csv");
    if (track) write_kalman_trace_csv(outcome.tracking.trace, dir + "/kalman_trace.csv");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pnmimo: massive MIMO-OFDM uplink under oscillator phase noise"};
    app.require_subcommand(1);

    ConfigFlags sweep_flags, analytic_flags, ici_flags;
    std::string grid_text, out_path, format = "csv", dump_dir;

    auto* sweep = app.add_subcommand("sweep", "Monte Carlo capacity versus P/sigma_w^2");
    sweep_flags.attach(sweep);
    sweep->add_option("--grid", grid_text, "dB grid: start:stop:step or a,b,c (default -10:30:5)");
    sweep->add_option("--out", out_path, "output file (stdout if omitted)");
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--dump-dir", dump_dir, "write trial-0 traces, frames and tracker steps here");

    auto* analytic = app.add_subcommand("analytic", "capacity from the large-array SNR formula");
    analytic_flags.attach(analytic);
    analytic->add_option("--grid", grid_text, "dB grid: start:stop:step or a,b,c (default -10:30:5)");
    analytic->add_option("--out", out_path, "output file (stdout if omitted)");
    analytic->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* ici = app.add_subcommand("ici-var", "print the unit-power ICI variance for a config");
    ici_flags.attach(ici);

    app.add_subcommand("selftest", "run the oracle-equivalence checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "pnmimo: %s\n", e.what());
        return 1;
    }

    try {
        const auto grid = grid_text.empty() ? default_grid() : parse_grid(grid_text);
        if (sweep->parsed()) {
            const auto config = sweep_flags.resolve();
            if (!dump_dir.empty()) dump_first_trial(config, grid.front(), dump_dir);
            write_or_print(run_sweep(config, grid), out_path, format);
        } else if (analytic->parsed()) {
            write_or_print(run_analytic_overlay(analytic_flags.resolve(), grid), out_path, format);
        } else if (ici->parsed()) {
            const auto config = ici_flags.resolve();
            std::printf("%.12g\n", ici_variance(config, config.ici_trials));
        } else {
            return tools::run_selftest(std::cout) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pnmimo: %s\n", e.what());
        return 1;
    }
    return 0;
}
