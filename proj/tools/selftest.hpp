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

#include <iosfwd>

namespace pnmimo::tools {

/// Oracle-equivalence checks: FFT theta vs direct sum, fast frame synthesis vs
/// the Theta-matrix product, factorized PN terms vs the quadruple sums, and the
/// MRC sum identity. Prints one line per check; returns true if all pass.
bool run_selftest(std::ostream& out);

} // namespace pnmimo::tools
