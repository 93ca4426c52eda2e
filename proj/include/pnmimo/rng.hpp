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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace pnmimo {

/// What a random stream is used for. Together with the master seed, the
/// trial index and a sub-index, the role identifies one independent stream.
enum class StreamRole : std::uint64_t {
    UePhase = 1,
    BsPhase = 2,
    Channel = 3,
    Symbols = 4,
    PilotNoise = 5,
    DataNoise = 6,
    TrainingNoise = 7,
    IciCalibration = 8,
    PriorCalibration = 9,
    Test = 100,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Hashes (master seed, trial, role, index) into a 64-bit stream seed.
/// Streams are never derived by drawing from another generator, so any trial
/// can be regenerated in isolation and in any order.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t trial, StreamRole role,
                                    std::uint64_t index = 0)
{
    std::uint64_t h = mix64(master);
    h = mix64(h ^ trial);
    h = mix64(h ^ static_cast<std::uint64_t>(role));
    h = mix64(h ^ index);
    return h;
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master, std::uint64_t trial, StreamRole role, std::uint64_t index = 0)
        : engine_(stream_seed(master, trial, role, index))
    {}

    /// Standard normal draw.
    double gaussian() { return normal_(engine_); }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance = 1.0)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    /// Uniform draw from {-1, +1}.
    int bpsk() { return (engine_() >> 63) ? 1 : -1; }

    double uniform() { return std::generate_canonical<double, 53>(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

} // namespace pnmimo
