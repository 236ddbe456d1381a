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

#include "tcdistill/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tcd {

namespace {
#ifdef _OPENMP
const int default_workers = omp_get_max_threads();
#endif
}  // namespace

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_worker_count(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n < 1 ? default_workers : n);
#else
    (void)n;
#endif
}

void set_worker_cap(int cap) {
#ifdef _OPENMP
    set_worker_count(cap < 1 || cap > default_workers ? default_workers : cap);
#else
    (void)cap;
#endif
}

void apply_thread_env() {
    const char* env = std::getenv("TCDISTILL_THREADS");
    if (env == nullptr || *env == '\0') return;
    try {
        set_worker_cap(std::stoi(env));
    } catch (const std::exception&) {
        // unparsable value: keep the runtime default
    }
}

}  // namespace tcd
