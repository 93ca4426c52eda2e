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

#include "pnmimo/analytic.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "pnmimo/stats.hpp"

namespace pnmimo {

namespace {

struct Windows {
    std::vector<cd> pilot; // exp(j psi) over [0, Nc)
    std::vector<cd> data;  // exp(j psi) over [D, D + Nc)
};

void check_coverage(const PhaseTrace& trace, const SystemConfig& config)
{
    const auto need = static_cast<std::size_t>(config.delay_samples + config.n_subcarriers);
    if (trace.size() < need)
        throw Error("pn_terms: trace covers " + std::to_string(trace.size()) + " samples, need " +
                    std::to_string(need));
}

const PhaseTrace* co_trace(std::span<const PhaseTrace> bs, const SystemConfig& config)
{
    if (config.scenario != Scenario::CO) return nullptr;
    if (bs.empty()) throw Error("pn_terms: CO scenario needs the shared BS trace");
    check_coverage(bs.front(), config);
    return &bs.front();
}

// psi = UE phase, plus the realized BS phase in CO.
Windows rotations(const PhaseTrace& ue, const PhaseTrace* bs, const SystemConfig& config)
{
    const auto nc = static_cast<std::size_t>(config.n_subcarriers);
    const auto d = static_cast<std::size_t>(config.delay_samples);
    Windows w{std::vector<cd>(nc), std::vector<cd>(nc)};
    for (std::size_t t = 0; t < nc; ++t) {
        const double p0 = ue.samples[t] + (bs ? bs->samples[t] : 0.0);
        const double pd = ue.samples[d + t] + (bs ? bs->samples[d + t] : 0.0);
        w.pilot[t] = std::polar(1.0, p0);
        w.data[t] = std::polar(1.0, pd);
    }
    return w;
}

// kernel[k] = exp(-bs_var * k / 2) for DO; all ones for CO (BS phase already in psi).
std::vector<double> decay_kernel(const SystemConfig& config, std::size_t length)
{
    std::vector<double> k(length, 1.0);
    if (config.scenario == Scenario::DO) {
        const double s2 = config.bs_increment_var();
        for (std::size_t i = 0; i < length; ++i) k[i] = std::exp(-0.5 * s2 * static_cast<double>(i));
    }
    return k;
}

// (1/Nc^2) sum_{n1,n2} conj(x[n1]) y[n2] kernel[|shift + n2 - n1|]
cd sesquilinear(std::span<const cd> x, std::span<const cd> y, std::span<const double> kernel,
                long shift)
{
    const long nc = static_cast<long>(x.size());
    cd acc{};
    for (long n1 = 0; n1 < nc; ++n1) {
        cd row{};
        for (long n2 = 0; n2 < nc; ++n2)
            row += y[static_cast<std::size_t>(n2)] * kernel[static_cast<std::size_t>(std::labs(shift + n2 - n1))];
        acc += std::conj(x[static_cast<std::size_t>(n1)]) * row;
    }
    const double inv = 1.0 / static_cast<double>(nc);
    return acc * inv * inv;
}

} // namespace

std::string_view to_string(SnrRegime r)
{
    switch (r) {
    case SnrRegime::Vanishing: return "vanishing";
    case SnrRegime::Finite: return "finite";
    case SnrRegime::Unbounded: return "unbounded";
    }
    return "?";
}

PnTerms pn_terms(const PhaseTrace& ue, std::span<const PhaseTrace> bs, const SystemConfig& config)
{
    check_coverage(ue, config);
    const PhaseTrace* shared = co_trace(bs, config);
    const auto w = rotations(ue, shared, config);
    const auto nc = static_cast<std::size_t>(config.n_subcarriers);
    const long d = config.delay_samples;
    const auto kernel = decay_kernel(config, static_cast<std::size_t>(d) + nc);

    // E_bs|theta_{0,0}|^2 and E_bs|theta_{D,0}|^2 as Hermitian forms.
    const double q_pilot = sesquilinear(w.pilot, w.pilot, kernel, 0).real();
    const double q_data = sesquilinear(w.data, w.data, kernel, 0).real();

    // Only the Delta = 0 entries survive sum_k exp(j 2 pi Delta k / Nc).
    double diag = 0.0;
    for (const auto& v : w.data) diag += std::norm(v) * kernel[0];
    diag /= static_cast<double>(nc);

    PnTerms pn;
    pn.scenario = config.scenario;
    pn.pn1 = q_pilot * q_data;
    pn.pn2 = config.scenario == Scenario::CO ? pn.pn1
                                             : std::norm(sesquilinear(w.pilot, w.data, kernel, d));
    pn.pn3 = q_pilot * (diag - q_data);
    pn.pn4 = q_pilot;
    pn.pn5 = diag;
    return pn;
}

PnTerms pn_terms_quadruple_sum(const PhaseTrace& ue, std::span<const PhaseTrace> bs,
                               const SystemConfig& config)
{
    if (config.n_subcarriers > kQuadrupleSumMaxSubcarriers)
        throw Error("pn_terms_quadruple_sum: Nc = " + std::to_string(config.n_subcarriers) +
                    " exceeds " + std::to_string(kQuadrupleSumMaxSubcarriers));
    check_coverage(ue, config);
    const PhaseTrace* shared = co_trace(bs, config);
    const bool co = config.scenario == Scenario::CO;
    const int nc = config.n_subcarriers;
    const int d = config.delay_samples;
    const double s2 = config.bs_increment_var();
    const auto& phi = ue.samples;
    auto vphi = [&](int t) { return shared->samples[static_cast<std::size_t>(t)]; };
    auto ph = [&](int t) { return phi[static_cast<std::size_t>(t)]; };
    auto cis = [](double a) { return std::polar(1.0, a); };
    auto damp = [&](int t) { return std::exp(-0.5 * s2 * std::abs(t)); };

    cd pn1{}, pn2{}, pn3{};
    for (int n1 = 0; n1 < nc; ++n1)
        for (int n2 = 0; n2 < nc; ++n2)
            for (int n3 = 0; n3 < nc; ++n3)
                for (int n4 = 0; n4 < nc; ++n4) {
                    const cd ue_part = cis(ph(d + n2) - ph(d + n4)) * cis(ph(n3) - ph(n1));
                    cd b1, b2;
                    if (co) {
                        b1 = cis(vphi(d + n2) - vphi(d + n4)) * cis(vphi(n3) - vphi(n1));
                        b2 = b1;
                    } else {
                        b1 = damp(n4 - n2) * damp(n3 - n1);
                        b2 = damp(d + n2 - n1) * damp(d + n4 - n3);
                    }
                    cd ici_sum{};
                    for (int k = 1; k < nc; ++k)
                        ici_sum += cis(2.0 * kPi * static_cast<double>((n2 - n4) * k) / nc);
                    pn1 += ue_part * b1;
                    pn2 += ue_part * b2;
                    pn3 += ue_part * b1 * ici_sum;
                }

    cd pn4{}, pn5{};
    for (int n1 = 0; n1 < nc; ++n1)
        for (int n2 = 0; n2 < nc; ++n2) {
            const cd b4 = co ? cis(vphi(n2) - vphi(n1)) : cd{damp(n2 - n1)};
            pn4 += cis(ph(n2) - ph(n1)) * b4;
            const cd b5 = co ? cis(vphi(d + n2) - vphi(d + n1)) : cd{damp(n2 - n1)};
            cd orth{};
            for (int k = 0; k < nc; ++k) orth += cis(2.0 * kPi * static_cast<double>((n2 - n1) * k) / nc);
            pn5 += cis(ph(d + n2) - ph(d + n1)) * b5 * orth;
        }

    const double n4 = std::pow(static_cast<double>(nc), 4);
    const double n2 = static_cast<double>(nc) * nc;
    PnTerms pn;
    pn.scenario = config.scenario;
    pn.pn1 = pn1.real() / n4;
    pn.pn2 = pn2.real() / n4;
    pn.pn3 = pn3.real() / n4;
    pn.pn4 = pn4.real() / n2;
    pn.pn5 = pn5.real() / n2;
    return pn;
}

double ici_variance(const SystemConfig& config, int trials)
{
    if (trials < 1) throw Error("ici_variance: trials must be at least 1");
    const auto nc = static_cast<std::size_t>(config.n_subcarriers);
    std::vector<double> power(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        RngStream rng(config.seed, static_cast<std::uint64_t>(t), StreamRole::IciCalibration);
        const auto ue = generate_trace(nc, config.sigma_ue_rad, rng);
        const auto bs = generate_trace(nc, config.sigma_bs_rad, rng);
        const auto theta = theta_coefficients(ue.samples, bs.samples);
        cd ici{};
        for (std::size_t k = 1; k < nc; ++k) {
            const cd g = rng.complex_gaussian(1.0);
            ici += theta.values[k] * g * static_cast<double>(rng.bpsk());
        }
        power[static_cast<std::size_t>(t)] = std::norm(ici);
    }
    return mean_and_stderr(power).mean;
}

double ici_variance_cached(const SystemConfig& config)
{
    using Key = std::tuple<int, double, double, int, std::uint64_t>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{config.n_subcarriers, config.sigma_ue_rad, config.sigma_bs_rad, config.ici_trials,
                  config.seed};
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double v = ici_variance(config, config.ici_trials);
    cache.emplace(key, v);
    return v;
}

SnrRegime classify_regime(double alpha)
{
    if (alpha > 0.5) return SnrRegime::Vanishing;
    if (alpha < 0.5) return SnrRegime::Unbounded;
    return SnrRegime::Finite;
}

double snr_ratio(const PnTerms& pn, double sigma_ici_sq, double m, double alpha, double s2)
{
    if (!(s2 > 0.0)) throw Error("asymptotic SNR needs a positive noise variance");
    if (!(m > 0.0)) throw Error("asymptotic SNR needs a positive antenna count");
    const double m_2a1 = std::pow(m, 2.0 * alpha - 1.0);
    const double m_2a2 = std::pow(m, 2.0 * alpha - 2.0);
    const double m_a1 = std::pow(m, alpha - 1.0);
    const double num = 2.0 * pn.pn1 / m_2a1 + pn.pn2 / m_2a2;
    const double den = pn.pn3 / m_2a1 + pn.pn4 * s2 / m_a1 + m * s2 * s2 + sigma_ici_sq * s2 / m_a1 +
                       s2 * pn.pn5 / m_a1 + sigma_ici_sq * pn.pn5 / m_2a1;
    return num / den;
}

AsymptoticSnr asymptotic_snr(const PnTerms& pn, double sigma_ici_sq, const SystemConfig& config)
{
    AsymptoticSnr out;
    out.sigma_ici_sq = sigma_ici_sq;
    out.snr = snr_ratio(pn, sigma_ici_sq, static_cast<double>(config.n_antennas), config.alpha,
                        config.noise_var);
    out.regime = classify_regime(config.alpha);
    switch (out.regime) {
    case SnrRegime::Vanishing: out.limit = 0.0; break;
    case SnrRegime::Finite: out.limit = pn.pn2 / (config.noise_var * config.noise_var); break;
    case SnrRegime::Unbounded: out.limit = std::numeric_limits<double>::infinity(); break;
    }
    return out;
}

CapacityEstimate ergodic_capacity(std::span<const double> snr_samples)
{
    if (snr_samples.empty()) throw Error("ergodic_capacity: no samples");
    std::vector<double> rate(snr_samples.size());
    for (std::size_t i = 0; i < snr_samples.size(); ++i) {
        const double s = snr_samples[i];
        if (!(s >= 0.0)) throw Error("ergodic_capacity: negative or NaN SNR sample");
        rate[i] = std::log2(1.0 + s);
    }
    const auto est = mean_and_stderr(rate);
    return {est.mean, est.std_err};
}

} // namespace pnmimo
