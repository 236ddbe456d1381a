// Copyright 2026 The tcdistill Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace tcd {

/// Number of OpenMP workers the kernels will use.
int worker_count();

/// Caps the worker count at or below the runtime default. Values < 1 restore
/// the default.
void set_worker_cap(int cap);

/// Sets the worker count exactly, oversubscribing if asked. Values < 1 restore
/// the runtime default.
void set_worker_count(int n);

/// Reads TCDISTILL_THREADS and applies it as the worker cap, if set.
void apply_thread_env();

/// Neumaier-compensated accumulator. All reductions in the library that cross
/// a parallel boundary go through per-slot partials summed with this, in index
/// order, so results do not depend on the worker count.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double ordered_sum(std::span<const double> values) {
    CompensatedSum s;
    for (double v : values) s.add(v);
    return s.value();
}

/// Runs body(i) for i in [0, n) on the OpenMP pool, static schedule.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        body(static_cast<std::size_t>(i));
    }
}

}  // namespace tcd
