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

// Student segmenter: a linear-softmax pixel classifier over PixelFeatures.
// p(i) = softmax(W * phi(i) + b).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tcdistill/features.hpp"
#include "tcdistill/image.hpp"

namespace tcd {

struct StudentParams {
    std::size_t classes = 0;
    std::size_t features = feature_count;
    std::vector<double> weights;  ///< classes x features, row-major
    std::vector<double> bias;     ///< classes

    static StudentParams zeros(std::size_t classes);
    /// Weights drawn uniformly from [-scale, scale]; bias zero.
    static StudentParams random(std::size_t classes, std::uint64_t seed, double scale = 0.01);

    /// Throws std::invalid_argument on inconsistent dimensions or non-finite values.
    void validate() const;

    double weight(std::size_t c, std::size_t f) const { return weights[c * features + f]; }

    bool operator==(const StudentParams&) const = default;
};

/// Gradient with respect to (weights, bias), plus the loss value it belongs to.
struct StudentGradient {
    std::vector<double> weights;
    std::vector<double> bias;
    double loss = 0.0;
};

SoftMask student_forward(const PixelFeatures& phi, const StudentParams& theta);
SoftMask student_forward(const ColorImage& x, const StudentParams& theta);

/// Gradient of weight * (1/I) * sum_i ||p(i) - target(i)||^2.
StudentGradient student_backward(const PixelFeatures& phi, const StudentParams& theta, const SoftMask& target,
                                 double weight);
StudentGradient student_backward(const ColorImage& x, const StudentParams& theta, const SoftMask& target,
                                 double weight);

/// theta - step * grad
StudentParams apply_step(const StudentParams& theta, const StudentGradient& grad, double step);

}  // namespace tcd
