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

#include "tcdistill/student.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcdistill/parallel.hpp"
#include "tcdistill/rng.hpp"

namespace tcd {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// logits -> probabilities in place
void softmax(double* z, std::size_t n) {
    const double m = *std::max_element(z, z + n);
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        z[c] = std::exp(z[c] - m);
        s += z[c];
    }
    for (std::size_t c = 0; c < n; ++c) z[c] /= s;
}

void probabilities(const StudentParams& theta, std::span<const double> phi, double* out) {
    for (std::size_t c = 0; c < theta.classes; ++c) {
        double z = theta.bias[c];
        const double* wrow = &theta.weights[c * theta.features];
        for (std::size_t f = 0; f < theta.features; ++f) z += wrow[f] * phi[f];
        out[c] = z;
    }
    softmax(out, theta.classes);
}

}  // namespace

StudentParams StudentParams::zeros(std::size_t classes) {
    StudentParams p;
    p.classes = classes;
    p.weights.assign(classes * feature_count, 0.0);
    p.bias.assign(classes, 0.0);
    return p;
}

StudentParams StudentParams::random(std::size_t classes, std::uint64_t seed, double scale) {
    StudentParams p = zeros(classes);
    Engine e(mix_seed(seed));
    for (double& w : p.weights) w = uniform(e, -scale, scale);
    return p;
}

void StudentParams::validate() const {
    if (classes < 1) throw std::invalid_argument("student: classes must be >= 1");
    if (features != feature_count) throw std::invalid_argument("student: feature count must be 7");
    if (weights.size() != classes * features || bias.size() != classes) {
        throw std::invalid_argument("student: parameter dimensions inconsistent with classes/features");
    }
    if (!all_finite(weights) || !all_finite(bias)) throw std::invalid_argument("student: non-finite parameter");
}

SoftMask student_forward(const PixelFeatures& phi, const StudentParams& theta) {
    theta.validate();
    const std::size_t c = theta.classes;
    std::vector<double> out(phi.pixels() * c);
    parallel_for(phi.height, [&](std::size_t y) {
        for (std::size_t x = 0; x < phi.width; ++x) {
            const std::size_t i = y * phi.width + x;
            probabilities(theta, phi.pixel(i), &out[i * c]);
        }
    });
    return SoftMask(phi.width, phi.height, c, std::move(out));
}

SoftMask student_forward(const ColorImage& x, const StudentParams& theta) {
    return student_forward(extract_features(x), theta);
}

StudentGradient student_backward(const PixelFeatures& phi, const StudentParams& theta, const SoftMask& target,
                                 double weight) {
    theta.validate();
    if (target.width() != phi.width || target.height() != phi.height || target.classes() != theta.classes) {
        throw std::invalid_argument("student_backward: target shape does not match input/classes");
    }
    if (!std::isfinite(weight)) throw std::invalid_argument("student_backward: non-finite weight");

    const std::size_t nc = theta.classes;
    const std::size_t nf = theta.features;
    const std::size_t stride = nc * nf + nc + 1;  // dW, db, loss
    const double scale = weight / static_cast<double>(phi.pixels());

    // Per-row partials keep the reduction order independent of the worker count.
    std::vector<double> partial(phi.height * stride, 0.0);
    parallel_for(phi.height, [&](std::size_t y) {
        double* acc = &partial[y * stride];
        std::vector<double> p(nc), g(nc);
        for (std::size_t x = 0; x < phi.width; ++x) {
            const std::size_t i = y * phi.width + x;
            const auto f = phi.pixel(i);
            probabilities(theta, f, p.data());
            const auto t = target.pixel(i);
            double sq = 0.0, pg = 0.0;
            for (std::size_t c = 0; c < nc; ++c) {
                const double r = p[c] - t[c];
                sq += r * r;
                g[c] = 2.0 * scale * r;
                pg += p[c] * g[c];
            }
            for (std::size_t c = 0; c < nc; ++c) {
                const double dz = p[c] * (g[c] - pg);
                double* dw = acc + c * nf;
                for (std::size_t k = 0; k < nf; ++k) dw[k] += dz * f[k];
                acc[nc * nf + c] += dz;
            }
            acc[stride - 1] += sq;
        }
    });

    StudentGradient out;
    out.weights.assign(nc * nf, 0.0);
    out.bias.assign(nc, 0.0);
    std::vector<CompensatedSum> sums(stride);
    for (std::size_t y = 0; y < phi.height; ++y) {
        for (std::size_t k = 0; k < stride; ++k) sums[k].add(partial[y * stride + k]);
    }
    for (std::size_t k = 0; k < nc * nf; ++k) out.weights[k] = sums[k].value();
    for (std::size_t c = 0; c < nc; ++c) out.bias[c] = sums[nc * nf + c].value();
    out.loss = scale * sums[stride - 1].value();

    if (!all_finite(out.weights) || !all_finite(out.bias) || !std::isfinite(out.loss)) {
        throw std::runtime_error("student_backward: non-finite gradient");
    }
    return out;
}

StudentGradient student_backward(const ColorImage& x, const StudentParams& theta, const SoftMask& target,
                                 double weight) {
    return student_backward(extract_features(x), theta, target, weight);
}

StudentParams apply_step(const StudentParams& theta, const StudentGradient& grad, double step) {
    StudentParams next = theta;
    for (std::size_t k = 0; k < next.weights.size(); ++k) next.weights[k] -= step * grad.weights[k];
    for (std::size_t c = 0; c < next.bias.size(); ++c) next.bias[c] -= step * grad.bias[c];
    return next;
}

}  // namespace tcd
