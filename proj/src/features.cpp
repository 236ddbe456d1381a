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

#include "tcdistill/features.hpp"

#include <algorithm>
#include <cmath>

#include "tcdistill/parallel.hpp"

namespace tcd {

PixelFeatures extract_features(const ColorImage& img) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const GrayImage luma = to_gray(img);
    const auto rgb = img.data();

    PixelFeatures out;
    out.width = w;
    out.height = h;
    out.values.resize(w * h * feature_count);

    const double x_scale = w > 1 ? 1.0 / static_cast<double>(w - 1) : 0.0;
    const double y_scale = h > 1 ? 1.0 / static_cast<double>(h - 1) : 0.0;

    parallel_for(h, [&](std::size_t y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t i = y * w + x;
            double* f = &out.values[i * feature_count];
            f[0] = rgb[3 * i] / 255.0;
            f[1] = rgb[3 * i + 1] / 255.0;
            f[2] = rgb[3 * i + 2] / 255.0;
            f[3] = static_cast<double>(x) * x_scale;
            f[4] = static_cast<double>(y) * y_scale;

            double s = 0.0, ss = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const auto yy = static_cast<std::size_t>(
                    std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(y) + dy, 0, static_cast<std::ptrdiff_t>(h) - 1));
                for (int dx = -1; dx <= 1; ++dx) {
                    const auto xx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                        static_cast<std::ptrdiff_t>(x) + dx, 0, static_cast<std::ptrdiff_t>(w) - 1));
                    const double v = luma.at(xx, yy);
                    s += v;
                    ss += v * v;
                }
            }
            const double mean = s / 9.0;
            const double var = std::max(0.0, ss / 9.0 - mean * mean);
            f[5] = std::clamp(mean / 255.0, 0.0, 1.0);
            f[6] = std::clamp(std::sqrt(var) / 127.5, 0.0, 1.0);
        }
    });
    return out;
}

}  // namespace tcd
