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

#include <cstddef>
#include <span>
#include <vector>

#include "tcdistill/image.hpp"

namespace tcd {

/// Per-pixel feature layout, every entry in [0, 1]:
///   0..2  R, G, B / 255
///   3, 4  x / (W-1), y / (H-1)
///   5     3x3 luma mean / 255
///   6     3x3 luma standard deviation / 127.5
/// The 3x3 neighbourhood replicates edge pixels.
inline constexpr std::size_t feature_count = 7;

struct PixelFeatures {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;  ///< pixels x feature_count, row-major

    std::size_t pixels() const noexcept { return width * height; }
    std::span<const double> pixel(std::size_t i) const noexcept {
        return std::span<const double>(values).subspan(i * feature_count, feature_count);
    }
};

PixelFeatures extract_features(const ColorImage& img);

}  // namespace tcd
