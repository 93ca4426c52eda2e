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

#include "pnmimo/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "pnmimo/config.hpp"

namespace pnmimo::fft {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, direction) and never freed
// before exit.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& slot = plans_[{n, sign}];
        if (!slot) {
            std::vector<cd> a(n), b(n);
            auto* in = reinterpret_cast<fftw_complex*>(a.data());
            auto* out = reinterpret_cast<fftw_complex*>(b.data());
            // ESTIMATE keeps the algorithm choice identical from run to run.
            slot.reset(fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED));
            if (!slot) throw Error("FFTW failed to create a plan of size " + std::to_string(n));
        }
        return slot.get();
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, Plan> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

void run(std::span<const cd> in, std::span<cd> out, int sign)
{
    if (in.size() != out.size()) throw Error("fft: input and output lengths differ");
    if (in.empty()) return;
    auto plan = cache().get(in.size(), sign);
    // The cached plans are out-of-place and must not be executed in place.
    if (in.data() == out.data()) {
        std::vector<cd> tmp(in.begin(), in.end());
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    } else {
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }
}

} // namespace

void forward(std::span<const cd> in, std::span<cd> out) { run(in, out, FFTW_FORWARD); }
void backward(std::span<const cd> in, std::span<cd> out) { run(in, out, FFTW_BACKWARD); }

} // namespace pnmimo::fft
