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

// Independent re-derivations used as test oracles. Nothing here calls into the
// library's numerical code; each function is written from the formula alone,
// favouring obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tcdistill/image.hpp"
#include "tcdistill/student.hpp"

namespace oracle {

// SSIM over every fully contained window. The 2-D Gaussian is built and
// normalized directly, and every statistic is a two-pass weighted sum.
inline double ssim(const tcd::GrayImage& a, const tcd::GrayImage& b, int window = 11, double sigma = 1.5,
                   double k1 = 0.01, double k2 = 0.03, double range = 255.0) {
    const int r = window / 2;
    std::vector<double> w(static_cast<std::size_t>(window * window));
    double total = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            w[static_cast<std::size_t>((dy + r) * window + dx + r)] = v;
            total += v;
        }
    }
    for (double& v : w) v /= total;
    const double c1 = (k1 * range) * (k1 * range);
    const double c2 = (k2 * range) * (k2 * range);

    const int width = static_cast<int>(a.width());
    const int height = static_cast<int>(a.height());
    double sum = 0.0;
    long count = 0;
    for (int y = r; y + r < height; ++y) {
        for (int x = r; x + r < width; ++x) {
            double ma = 0.0, mb = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const double wk = w[static_cast<std::size_t>((dy + r) * window + dx + r)];
                    ma += wk * a.at(static_cast<std::size_t>(x + dx), static_cast<std::size_t>(y + dy));
                    mb += wk * b.at(static_cast<std::size_t>(x + dx), static_cast<std::size_t>(y + dy));
                }
            }
            double va = 0.0, vb = 0.0, cov = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const double wk = w[static_cast<std::size_t>((dy + r) * window + dx + r)];
                    const double da = a.at(static_cast<std::size_t>(x + dx), static_cast<std::size_t>(y + dy)) - ma;
                    const double db = b.at(static_cast<std::size_t>(x + dx), static_cast<std::size_t>(y + dy)) - mb;
                    va += wk * da * da;
                    vb += wk * db * db;
                    cov += wk * da * db;
                }
            }
            sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

// Mean IoU by counting pixel sets class by class.
inline double miou(const tcd::ClassMask& pred, const tcd::ClassMask& truth) {
    double sum = 0.0;
    int present = 0;
    for (std::size_t c = 0; c < pred.classes(); ++c) {
        long inter = 0, uni = 0;
        for (std::size_t y = 0; y < pred.height(); ++y) {
            for (std::size_t x = 0; x < pred.width(); ++x) {
                const bool p = pred.at(x, y) == c;
                const bool t = truth.at(x, y) == c;
                inter += (p && t) ? 1 : 0;
                uni += (p || t) ? 1 : 0;
            }
        }
        if (uni > 0) {
            sum += static_cast<double>(inter) / static_cast<double>(uni);
            ++present;
        }
    }
    return present == 0 ? 0.0 : sum / present;
}

// weight * (1/I) * sum_i ||softmax(W phi_i + b) - target_i||^2 with features
// supplied as a flat pixels x F array.
inline double student_loss(const std::vector<double>& phi, std::size_t features, const tcd::StudentParams& theta,
                           const std::vector<double>& target, double weight) {
    const std::size_t classes = theta.classes;
    const std::size_t pixels = phi.size() / features;
    double total = 0.0;
    std::vector<double> z(classes);
    for (std::size_t i = 0; i < pixels; ++i) {
        for (std::size_t c = 0; c < classes; ++c) {
            z[c] = theta.bias[c];
            for (std::size_t f = 0; f < features; ++f) z[c] += theta.weights[c * features + f] * phi[i * features + f];
        }
        const double m = *std::max_element(z.begin(), z.end());
        double norm = 0.0;
        for (double v : z) norm += std::exp(v - m);
        for (std::size_t c = 0; c < classes; ++c) {
            const double d = std::exp(z[c] - m) / norm - target[i * classes + c];
            total += d * d;
        }
    }
    return weight * total / static_cast<double>(pixels);
}

inline tcd::GrayImage random_gray(std::mt19937_64& rng, std::size_t w, std::size_t h, double lo = 0.0,
                                  double hi = 255.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> data(w * h);
    for (double& v : data) v = u(rng);
    return tcd::GrayImage(w, h, std::move(data));
}

inline tcd::ColorImage random_color(std::mt19937_64& rng, std::size_t w, std::size_t h) {
    std::uniform_real_distribution<double> u(0.0, 255.0);
    std::vector<double> data(3 * w * h);
    for (double& v : data) v = u(rng);
    return tcd::ColorImage(w, h, std::move(data));
}

inline tcd::ClassMask random_mask(std::mt19937_64& rng, std::size_t w, std::size_t h, std::size_t classes) {
    std::uniform_int_distribution<int> u(0, static_cast<int>(classes) - 1);
    std::vector<std::uint8_t> data(w * h);
    for (auto& v : data) v = static_cast<std::uint8_t>(u(rng));
    return tcd::ClassMask(w, h, classes, std::move(data));
}

inline tcd::SoftMask random_soft(std::mt19937_64& rng, std::size_t w, std::size_t h, std::size_t classes) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> data(w * h * classes);
    for (std::size_t i = 0; i < w * h; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < classes; ++c) s += data[i * classes + c] = u(rng);
        for (std::size_t c = 0; c < classes; ++c) data[i * classes + c] /= s;
    }
    return tcd::SoftMask(w, h, classes, std::move(data));
}

inline tcd::StudentParams random_student(std::mt19937_64& rng, std::size_t classes, std::size_t features,
                                         double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    tcd::StudentParams p;
    p.classes = classes;
    p.features = features;
    p.weights.resize(classes * features);
    p.bias.resize(classes);
    for (double& v : p.weights) v = u(rng);
    for (double& v : p.bias) v = u(rng);
    return p;
}

}  // namespace oracle
