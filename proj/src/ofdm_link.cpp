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

#include "pnmimo/ofdm_link.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pnmimo/fft.hpp"

namespace pnmimo {

namespace {

void check_inputs(const ChannelRealization& channel, const OscillatorBank& osc,
                  std::span<const int> symbols, std::size_t window_start, double power)
{
    const std::size_t nc = channel.g.cols();
    if (symbols.size() != nc)
        throw Error("symbol count " + std::to_string(symbols.size()) + " does not match Nc = " +
                    std::to_string(nc));
    if (!(power > 0.0)) throw Error("transmit power must be positive");
    if (osc.scenario == Scenario::DO && osc.bs.size() < channel.g.rows())
        throw Error("DO scenario needs one BS trace per antenna");
    if (osc.bs.empty()) throw Error("no BS oscillator trace");
    // Throws if any trace does not cover the window.
    (void)osc.ue.segment(window_start, nc);
    for (const auto& t : osc.bs) (void)t.segment(window_start, nc);
}

bool window_phase_free(std::span<const double> ue, std::span<const double> bs)
{
    for (std::size_t t = 0; t < ue.size(); ++t)
        if (ue[t] + bs[t] != 0.0) return false;
    return true;
}

ReceivedFrame empty_frame(std::size_t m, std::size_t nc, std::span<const int> symbols,
                          std::size_t window_start, double power, FrameRole role)
{
    ReceivedFrame f;
    f.role = role;
    f.window_start = window_start;
    f.power = power;
    f.noise_var = 0.0;
    f.symbols.assign(symbols.begin(), symbols.end());
    f.signal_part = CMatrix(m, nc);
    f.ici_part = CMatrix(m, nc);
    f.awgn_part = CMatrix(m, nc);
    f.theta = CMatrix(m, nc);
    f.tx = CMatrix(m, nc);
    return f;
}

} // namespace

std::vector<int> draw_symbols(std::size_t n_subcarriers, RngStream& stream)
{
    std::vector<int> c(n_subcarriers);
    for (auto& v : c) v = stream.bpsk();
    return c;
}

ReceivedFrame synthesize_noiseless(const ChannelRealization& channel, const OscillatorBank& osc,
                                   std::span<const int> symbols, std::size_t window_start,
                                   double power, FrameRole role)
{
    check_inputs(channel, osc, symbols, window_start, power);
    const std::size_t m_count = channel.g.rows();
    const std::size_t nc = channel.g.cols();
    const double amp = std::sqrt(power);
    const double inv_nc = 1.0 / static_cast<double>(nc);

    ReceivedFrame f = empty_frame(m_count, nc, symbols, window_start, power, role);

    std::vector<cd> rot(nc), time(nc), freq(nc), theta(nc);
    const PhaseTrace* last_bs = nullptr;
    bool phase_free = false;

    for (std::size_t m = 0; m < m_count; ++m) {
        auto tx = f.tx.row(m);
        for (std::size_t k = 0; k < nc; ++k)
            tx[k] = amp * channel.g(m, k) * static_cast<double>(symbols[k]);

        // CO antennas share one trace, so the rotation is computed once.
        const PhaseTrace& bs = osc.bs_for(m);
        if (&bs != last_bs) {
            last_bs = &bs;
            const auto ue_seg = osc.ue.segment(window_start, nc);
            const auto bs_seg = bs.segment(window_start, nc);
            phase_free = window_phase_free(ue_seg, bs_seg);
            if (!phase_free) {
                for (std::size_t t = 0; t < nc; ++t) rot[t] = std::polar(1.0, ue_seg[t] + bs_seg[t]);
                fft::backward(rot, theta);
                for (auto& v : theta) v *= inv_nc;
            } else {
                std::fill(theta.begin(), theta.end(), cd{});
                theta[0] = 1.0;
            }
        }
        std::copy(theta.begin(), theta.end(), f.theta.row(m).begin());

        auto sig = f.signal_part.row(m);
        auto ici = f.ici_part.row(m);
        if (phase_free) {
            for (std::size_t k = 0; k < nc; ++k) sig[k] = tx[k];
            continue;
        }
        fft::backward(tx, time);
        for (std::size_t t = 0; t < nc; ++t) time[t] *= rot[t];
        fft::forward(time, freq);
        for (std::size_t k = 0; k < nc; ++k) {
            sig[k] = theta[0] * tx[k];
            ici[k] = freq[k] * inv_nc - sig[k];
        }
    }
    f.assemble();
    return f;
}

CMatrix draw_unit_noise(std::size_t n_antennas, std::size_t n_subcarriers, RngStream& stream)
{
    CMatrix w(n_antennas, n_subcarriers);
    for (auto& v : w.data()) v = stream.complex_gaussian(1.0);
    return w;
}

void set_noise(ReceivedFrame& frame, const CMatrix& unit_noise, double noise_var)
{
    if (unit_noise.rows() != frame.signal_part.rows() || unit_noise.cols() != frame.signal_part.cols())
        throw Error("noise matrix dimensions do not match the frame");
    if (!(noise_var >= 0.0)) throw Error("noise variance must be nonnegative");
    const double s = std::sqrt(noise_var);
    frame.noise_var = noise_var;
    auto& w = frame.awgn_part.data();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = s * unit_noise.data()[k];
    frame.assemble();
}

ReceivedFrame with_noise(ReceivedFrame frame, const CMatrix& unit_noise, double noise_var)
{
    set_noise(frame, unit_noise, noise_var);
    return frame;
}

ReceivedFrame synthesize_frame(const SystemConfig& config, const ChannelRealization& channel,
                               const OscillatorBank& osc, std::span<const int> symbols,
                               std::size_t window_start, double power, FrameRole role,
                               RngStream& noise)
{
    auto frame = synthesize_noiseless(channel, osc, symbols, window_start, power, role);
    const auto unit = draw_unit_noise(frame.n_antennas(), frame.n_subcarriers(), noise);
    return with_noise(std::move(frame), unit, config.noise_var);
}

ReceivedFrame theta_matrix_oracle(const ChannelRealization& channel, const OscillatorBank& osc,
                                  std::span<const int> symbols, std::size_t window_start,
                                  double power, FrameRole role)
{
    check_inputs(channel, osc, symbols, window_start, power);
    const std::size_t m_count = channel.g.rows();
    const std::size_t nc = channel.g.cols();
    const std::size_t dim = m_count * nc;
    if (dim > kOracleMaxDimension)
        throw Error("theta_matrix_oracle: M*Nc = " + std::to_string(dim) + " exceeds cap " +
                    std::to_string(kOracleMaxDimension));

    // theta(m, k) by the defining sum.
    CMatrix theta(m_count, nc);
    for (std::size_t m = 0; m < m_count; ++m) {
        const auto ue = osc.ue.segment(window_start, nc);
        const auto bs = osc.bs_for(m).segment(window_start, nc);
        for (std::size_t k = 0; k < nc; ++k) {
            cd acc{};
            for (std::size_t t = 0; t < nc; ++t) {
                const double arg = 2.0 * kPi * static_cast<double>(t * k % nc) / static_cast<double>(nc);
                acc += std::polar(1.0, arg) * std::polar(1.0, ue[t] + bs[t]);
            }
            theta(m, k) = acc / static_cast<double>(nc);
        }
    }

    // Row/column index of the stacked vectors: subcarrier * M + antenna.
    std::vector<cd> big_theta(dim * dim, cd{});
    for (std::size_t bn = 0; bn < nc; ++bn) {
        for (std::size_t bk = 0; bk < nc; ++bk) {
            const std::size_t offset = (bk + nc - bn) % nc;
            for (std::size_t m = 0; m < m_count; ++m)
                big_theta[(bn * m_count + m) * dim + (bk * m_count + m)] = theta(m, offset);
        }
    }
    std::vector<cd> big_g(dim * nc, cd{});
    for (std::size_t k = 0; k < nc; ++k)
        for (std::size_t m = 0; m < m_count; ++m) big_g[(k * m_count + m) * nc + k] = channel.g(m, k);

    std::vector<cd> gc(dim, cd{});
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t k = 0; k < nc; ++k) gc[r] += big_g[r * nc + k] * static_cast<double>(symbols[k]);

    const double amp = std::sqrt(power);
    ReceivedFrame f = empty_frame(m_count, nc, symbols, window_start, power, role);
    f.theta = theta;
    for (std::size_t bn = 0; bn < nc; ++bn) {
        for (std::size_t m = 0; m < m_count; ++m) {
            const std::size_t r = bn * m_count + m;
            cd total{}, diag{};
            for (std::size_t c = 0; c < dim; ++c) {
                const cd term = big_theta[r * dim + c] * gc[c];
                total += term;
                if (c / m_count == bn) diag += term;
            }
            f.tx(m, bn) = amp * gc[r];
            f.signal_part(m, bn) = amp * diag;
            f.ici_part(m, bn) = amp * (total - diag);
        }
    }
    f.assemble();
    return f;
}

SnrBreakdown mrc_detect(const ChannelEstimate& est, const ReceivedFrame& data, std::size_t n)
{
    const std::size_t m_count = data.n_antennas();
    const std::size_t nc = data.n_subcarriers();
    if (est.clean.empty() || est.contamination.empty())
        throw Error("mrc_detect: channel estimate carries no pilot ground truth");
    if (data.theta.empty() || data.tx.empty() || data.signal_part.empty())
        throw Error("mrc_detect: data frame carries no ground truth");
    if (est.n_antennas() != m_count || est.n_subcarriers() != nc)
        throw Error("mrc_detect: estimate and frame dimensions differ");
    if (n >= nc) throw Error("mrc_detect: subcarrier index out of range");

    SnrBreakdown out;
    for (std::size_t m = 0; m < m_count; ++m) {
        const cd a = std::conj(est.clean(m, n));
        const cd wt = std::conj(est.contamination(m, n));
        out.c_hat += std::conj(est.g_hat(m, n)) * data.y(m, n);
        out.t_sig += a * data.signal_part(m, n);
        out.t_ici += a * data.ici_part(m, n);
        out.t_awgn += a * data.awgn_part(m, n) + wt * data.y(m, n);
    }

    double ghat_energy = 0.0;
    cd wt_sig{};
    for (std::size_t m = 0; m < m_count; ++m) {
        ghat_energy += std::norm(est.g_hat(m, n));
        wt_sig += std::conj(est.contamination(m, n)) * data.signal_part(m, n);
    }
    double ici_power = 0.0;
    double wt_ici_power = 0.0;
    for (std::size_t k = 0; k < nc; ++k) {
        if (k == n) continue;
        const std::size_t offset = (k + nc - n) % nc;
        cd via_clean{}, via_contamination{};
        for (std::size_t m = 0; m < m_count; ++m) {
            const cd leak = data.theta(m, offset) * data.tx(m, k);
            via_clean += std::conj(est.clean(m, n)) * leak;
            via_contamination += std::conj(est.contamination(m, n)) * leak;
        }
        ici_power += std::norm(via_clean);
        wt_ici_power += std::norm(via_contamination);
    }

    out.sig_power = std::norm(out.t_sig);
    out.ici_power = ici_power;
    out.awgn_power = data.noise_var * ghat_energy + std::norm(wt_sig) + wt_ici_power;

    auto ratio = [](double num, double den) {
        if (den > 0.0) return num / den;
        return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    out.snr_inst = ratio(out.sig_power, out.ici_power + out.awgn_power);
    out.snr_realized = ratio(out.sig_power, std::norm(out.t_ici) + std::norm(out.t_awgn));
    return out;
}

} // namespace pnmimo
