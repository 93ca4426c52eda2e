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

#include <span>

#include "pnmimo/matrix.hpp"

namespace pnmimo::fft {

// Unnormalized DFTs of arbitrary length, backed by FFTW.
//   forward:  X[k] = sum_n x[n] exp(-j 2 pi k n / N)
//   backward: x[n] = sum_k X[k] exp(+j 2 pi k n / N)
// `in` and `out` must have equal length and may alias.

void forward(std::span<const cd> in, std::span<cd> out);
void backward(std::span<const cd> in, std::span<cd> out);

} // namespace pnmimo::fft
