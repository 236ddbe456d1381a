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

// Portable random draws. std::mt19937_64 is bit-specified by the standard, the
// <random> distributions are not, so conversions to reals are done here with
// plain integer/IEEE arithmetic only (no libm calls).

#include <cstdint>
#include <random>

namespace tcd {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; derives independent stream seeds from one seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Engine& e) {
    return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& e, double lo, double hi) {
    return lo + (hi - lo) * uniform01(e);
}

/// Zero-mean, unit-variance Irwin-Hall(12) draw: sum of twelve uniforms minus 6.
/// Bounded to [-6, 6]; close enough to Gaussian for sensor noise.
inline double standard_normal(Engine& e) {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += uniform01(e);
    return s - 6.0;
}

}  // namespace tcd
