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

#include "pnmimo/rng.hpp"

namespace pnmimo {

static_assert(stream_seed(1, 0, StreamRole::UePhase) != stream_seed(1, 0, StreamRole::BsPhase));
static_assert(stream_seed(1, 0, StreamRole::BsPhase, 0) != stream_seed(1, 0, StreamRole::BsPhase, 1));
static_assert(stream_seed(1, 0, StreamRole::UePhase) != stream_seed(1, 1, StreamRole::UePhase));

} // namespace pnmimo
