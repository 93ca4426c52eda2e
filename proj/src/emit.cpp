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
#include <fstream>

#include <json.hpp>

#include "pnmimo/experiments.hpp"

namespace pnmimo {

std::string to_json(const CapacityCurve& curve)
{
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(curve.kind));
    j["scenario"] = std::string(to_string(curve.scenario));
    j["compensation"] = std::string(to_string(curve.compensation));
    j["seed"] = curve.seed;
    nlohmann::ordered_json cfg;
    for (const auto& [key, value] : describe(curve.config_echo)) cfg[key] = value;
    j["config"] = cfg;
    auto& pts = j["points"] = nlohmann::ordered_json::array();
    for (const auto& p : curve.points)
        pts.push_back({{"db", p.p_over_sigma_db}, {"c_erg", p.c_erg}, {"std_err", p.std_err}});
    return j.dump(2) + "\n";
}

void emit(const CapacityCurve& curve, const std::string& path, OutputFormat format)
{
    if (curve.points.empty()) throw Error("refusing to write an empty curve to '" + path + "'");
    const std::string body = format == OutputFormat::Csv ? to_csv(curve) : to_json(curve);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << body;
    out.flush();
    if (!out) throw Error("write to '" + path + "' failed");
}

} // namespace pnmimo
