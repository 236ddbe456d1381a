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
#include <vector>

#include "tcdistill/image.hpp"

namespace tcd {

struct SsimParams {
    std::size_t window = 11;  ///< odd, >= 3
    double gaussian_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;

    void validate() const;
    double c1() const noexcept { return (k1 * dynamic_range) * (k1 * dynamic_range); }
    double c2() const noexcept { return (k2 * dynamic_range) * (k2 * dynamic_range); }

    bool operator==(const SsimParams&) const = default;
};

/// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
std::vector<double> gaussian_taps(const SsimParams& p);

/// Mean structural similarity over every window position that lies fully
/// inside the image (no padding). Symmetric in its arguments.
///
/// Window statistics come from a separable Gaussian filter; rows are processed
/// in parallel and the per-row sums of the SSIM map are combined in row order
/// with compensated summation.
double compute_ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p = {});

}  // namespace tcd
