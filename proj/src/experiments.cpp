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

#include "pnmimo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "pnmimo/stats.hpp"

namespace pnmimo {

namespace {

// Runs body(trial) for trial in [0, trials) on `workers` threads. Each trial
// writes only its own output slot, so the schedule never affects results.
template <typename Body>
void for_each_trial(int trials, int workers, Body&& body)
{
    workers = std::max(1, std::min(workers, trials));
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(trials);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

void check_grid(const std::vector<double>& grid)
{
    if (grid.empty()) throw Error("the dB grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw Error("the dB grid must be strictly increasing");
}

CapacityCurve aggregate(const SystemConfig& config, const std::vector<double>& grid,
                        const std::vector<double>& rates, CurveKind kind, Compensation comp)
{
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    CapacityCurve curve;
    curve.scenario = config.scenario;
    curve.compensation = comp;
    curve.kind = kind;
    curve.config_echo = config;
    curve.seed = config.seed;
    std::vector<double> column(trials);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        for (std::size_t t = 0; t < trials; ++t) column[t] = rates[t * grid.size() + p];
        const auto est = mean_and_stderr(column);
        curve.points.push_back({grid[p], est.mean, est.std_err});
    }
    return curve;
}

const std::vector<int>& ones(std::size_t n)
{
    thread_local std::vector<int> v;
    v.assign(n, 1);
    return v;
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string_view to_string(CurveKind k) { return k == CurveKind::Simulation ? "simulation" : "analytic"; }

std::vector<double> default_grid()
{
    std::vector<double> g;
    for (int db = -10; db <= 30; db += 5) g.push_back(db);
    return g;
}

std::vector<double> parse_grid(std::string_view text)
{
    auto number = [&](std::string_view s) {
        std::string tmp(s);
        char* end = nullptr;
        const double v = std::strtod(tmp.c_str(), &end);
        if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v))
            throw Error("invalid grid value '" + tmp + "'");
        return v;
    };
    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos) {
        const auto a = text.find(':');
        const auto b = text.find(':', a + 1);
        if (b == std::string_view::npos) throw Error("grid range must be start:stop:step");
        const double start = number(text.substr(0, a));
        const double stop = number(text.substr(a + 1, b - a - 1));
        const double step = number(text.substr(b + 1));
        if (!(step > 0.0)) throw Error("grid step must be positive");
        if (stop < start) throw Error("grid stop is below start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto comma = text.find(',', pos);
            if (comma == std::string_view::npos) comma = text.size();
            grid.push_back(number(text.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        std::sort(grid.begin(), grid.end());
    }
    if (grid.empty()) throw Error("the dB grid is empty");
    if (std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw Error("the dB grid contains duplicates");
    return grid;
}

double noise_var_for_db(const SystemConfig& config, double db)
{
    return config.power / std::pow(10.0, db / 10.0);
}

TrialLink prepare_trial(const SystemConfig& config, std::uint64_t trial, bool with_extension)
{
    const auto m = static_cast<std::size_t>(config.n_antennas);
    const auto nc = static_cast<std::size_t>(config.n_subcarriers);
    const auto d = static_cast<std::size_t>(config.delay_samples);

    TrialLink link;
    link.oscillators = generate_oscillators(config, trial);
    RngStream channel_rng(config.seed, trial, StreamRole::Channel);
    link.channel = generate_channel(m, nc, channel_rng);
    RngStream symbol_rng(config.seed, trial, StreamRole::Symbols);
    const auto symbols = draw_symbols(nc, symbol_rng);

    link.pilot = synthesize_noiseless(link.channel, link.oscillators, ones(nc), 0, config.power,
                                      FrameRole::Pilot);
    link.data = synthesize_noiseless(link.channel, link.oscillators, symbols, d, config.power,
                                     FrameRole::Data);
    RngStream pilot_rng(config.seed, trial, StreamRole::PilotNoise);
    link.pilot_noise = draw_unit_noise(m, nc, pilot_rng);
    RngStream data_rng(config.seed, trial, StreamRole::DataNoise);
    link.data_noise = draw_unit_noise(m, nc, data_rng);

    if (with_extension) {
        const int steps = config.training_symbols();
        for (int k = 1; k <= steps; ++k) {
            link.extension.push_back(synthesize_noiseless(link.channel, link.oscillators, ones(nc),
                                                          static_cast<std::size_t>(k) * nc,
                                                          config.training_power(),
                                                          FrameRole::TrainingExtension));
            RngStream rng(config.seed, trial, StreamRole::TrainingNoise, static_cast<std::uint64_t>(k));
            link.extension_noise.push_back(draw_unit_noise(m, nc, rng));
        }
    }
    return link;
}

LinkOutcome run_link(const SystemConfig& config, const TrackerCalibration& calibration,
                     TrialLink& trial, double noise_var, Compensation compensation,
                     bool record_trace)
{
    LinkOutcome out;
    set_noise(trial.pilot, trial.pilot_noise, noise_var);
    out.estimate = pilot_estimate(trial.pilot);

    if (compensation == Compensation::Kalman) {
        if (trial.extension.size() != static_cast<std::size_t>(config.training_symbols()))
            throw Error("run_link: trial was prepared without extended-training frames");
        for (std::size_t k = 0; k < trial.extension.size(); ++k)
            set_noise(trial.extension[k], trial.extension_noise[k], noise_var);
        SystemConfig cfg = config;
        cfg.noise_var = noise_var;
        const auto g0 = trial.channel.g.column(0);
        out.tracking = track_cpe(cfg, calibration, trial.pilot, trial.extension, g0, record_trace);
        const auto rot = compensation_rotation(out.tracking.theta_final, out.tracking.theta_pilot,
                                               config.compensation_form, trial.channel.g.rows());
        out.estimate = compensate(out.estimate, rot);
    }

    set_noise(trial.data, trial.data_noise, noise_var);
    out.snr = mrc_detect(out.estimate, trial.data, 0);
    return out;
}

int worker_count()
{
    if (const char* env = std::getenv("PNMIMO_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

CapacityCurve run_sweep(const SystemConfig& raw, const std::vector<double>& grid, int workers)
{
    const SystemConfig config = validate(raw);
    check_grid(grid);
    const bool track = config.compensation == Compensation::Kalman;
    const TrackerCalibration calibration = track ? calibrate_tracker(config) : TrackerCalibration{};

    std::vector<double> rates(static_cast<std::size_t>(config.trials) * grid.size());
    for_each_trial(config.trials, workers, [&](int t) {
        auto link = prepare_trial(config, static_cast<std::uint64_t>(t), track);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            const double nv = noise_var_for_db(config, grid[p]);
            const auto outcome = run_link(config, calibration, link, nv, config.compensation);
            rates[static_cast<std::size_t>(t) * grid.size() + p] = std::log2(1.0 + outcome.snr.snr_inst);
        }
    });
    return aggregate(config, grid, rates, CurveKind::Simulation, config.compensation);
}

CapacityCurve run_analytic_overlay(const SystemConfig& raw, const std::vector<double>& grid, int workers)
{
    const SystemConfig config = validate(raw);
    check_grid(grid);
    const double sigma_ici_sq = ici_variance_cached(config);
    const auto length = static_cast<std::size_t>(config.trace_length());

    std::vector<double> rates(static_cast<std::size_t>(config.trials) * grid.size());
    for_each_trial(config.trials, workers, [&](int t) {
        const auto trial = static_cast<std::uint64_t>(t);
        RngStream ue_rng(config.seed, trial, StreamRole::UePhase);
        const auto ue = generate_trace(length, config.sigma_ue_rad, ue_rng);
        std::vector<PhaseTrace> bs;
        if (config.scenario == Scenario::CO) {
            RngStream bs_rng(config.seed, trial, StreamRole::BsPhase, 0);
            bs.push_back(generate_trace(length, config.sigma_bs_rad, bs_rng));
        }
        const auto pn = pn_terms(ue, bs, config);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            const double snr = snr_ratio(pn, sigma_ici_sq, config.n_antennas, config.alpha,
                                         noise_var_for_db(config, grid[p]));
            rates[trial * grid.size() + p] = std::log2(1.0 + snr);
        }
    });
    return aggregate(config, grid, rates, CurveKind::Analytic, Compensation::None);
}

OutputFormat parse_format(std::string_view text)
{
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw Error("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::string to_csv(const CapacityCurve& curve)
{
    std::ostringstream os;
    os << "db,c_erg,std_err,scenario,compensation\n";
    for (const auto& p : curve.points)
        os << format_number(p.p_over_sigma_db) << ',' << format_number(p.c_erg) << ','
           << format_number(p.std_err) << ',' << to_string(curve.scenario) << ','
           << to_string(curve.compensation) << '\n';
    return os.str();
}

} // namespace pnmimo
