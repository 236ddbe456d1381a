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

#include "tcdistill/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tcdistill/parallel.hpp"

namespace tcd::reference {

double compute_ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p) {
    p.validate();
    if (a.width() != b.width() || a.height() != b.height()) throw std::invalid_argument("ssim: dimension mismatch");
    if (a.width() < p.window || a.height() < p.window) throw std::invalid_argument("ssim: image smaller than window");
    const auto taps = gaussian_taps(p);
    const std::size_t win = p.window;
    const double c1 = p.c1();
    const double c2 = p.c2();

    CompensatedSum total;
    for (std::size_t y = 0; y + win <= a.height(); ++y) {
        CompensatedSum row;
        for (std::size_t x = 0; x + win <= a.width(); ++x) {
            double ma = 0, mb = 0, maa = 0, mbb = 0, mab = 0;
            for (std::size_t j = 0; j < win; ++j) {
                for (std::size_t i = 0; i < win; ++i) {
                    const double g = taps[i] * taps[j];
                    const double va = a.at(x + i, y + j);
                    const double vb = b.at(x + i, y + j);
                    ma += g * va;
                    mb += g * vb;
                    maa += g * va * va;
                    mbb += g * vb * vb;
                    mab += g * va * vb;
                }
            }
            const double num = (2 * ma * mb + c1) * (2 * (mab - ma * mb) + c2);
            const double den = (ma * ma + mb * mb + c1) * ((maa - ma * ma) + (mbb - mb * mb) + c2);
            row.add(num / den);
        }
        total.add(row.value());
    }
    const double n = static_cast<double>((a.width() - win + 1) * (a.height() - win + 1));
    return total.value() / n;
}

PixelFeatures extract_features(const ColorImage& img) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const GrayImage luma = to_gray(img);
    PixelFeatures out{w, h, std::vector<double>(w * h * feature_count)};
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double* f = &out.values[(y * w + x) * feature_count];
            for (std::size_t c = 0; c < 3; ++c) f[c] = img.at(x, y, c) / 255.0;
            f[3] = w > 1 ? static_cast<double>(x) / static_cast<double>(w - 1) : 0.0;
            f[4] = h > 1 ? static_cast<double>(y) / static_cast<double>(h - 1) : 0.0;
            double s = 0, ss = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const auto xx = std::clamp<long>(static_cast<long>(x) + dx, 0, static_cast<long>(w) - 1);
                    const auto yy = std::clamp<long>(static_cast<long>(y) + dy, 0, static_cast<long>(h) - 1);
                    const double v = luma.at(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy));
                    s += v;
                    ss += v * v;
                }
            }
            const double mean = s / 9.0;
            f[5] = std::clamp(mean / 255.0, 0.0, 1.0);
            f[6] = std::clamp(std::sqrt(std::max(0.0, ss / 9.0 - mean * mean)) / 127.5, 0.0, 1.0);
        }
    }
    return out;
}

namespace {

std::vector<double> pixel_probs(const StudentParams& theta, std::span<const double> f) {
    std::vector<double> z(theta.classes);
    for (std::size_t c = 0; c < theta.classes; ++c) {
        z[c] = theta.bias[c];
        for (std::size_t k = 0; k < theta.features; ++k) z[c] += theta.weight(c, k) * f[k];
    }
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0;
    for (double& v : z) s += (v = std::exp(v - m));
    for (double& v : z) v /= s;
    return z;
}

}  // namespace

SoftMask student_forward(const PixelFeatures& phi, const StudentParams& theta) {
    theta.validate();
    std::vector<double> out;
    out.reserve(phi.pixels() * theta.classes);
    for (std::size_t i = 0; i < phi.pixels(); ++i) {
        const auto p = pixel_probs(theta, phi.pixel(i));
        out.insert(out.end(), p.begin(), p.end());
    }
    return SoftMask(phi.width, phi.height, theta.classes, std::move(out));
}

StudentGradient student_backward(const PixelFeatures& phi, const StudentParams& theta, const SoftMask& target,
                                 double weight) {
    theta.validate();
    const std::size_t nc = theta.classes;
    const std::size_t nf = theta.features;
    StudentGradient g{std::vector<double>(nc * nf, 0.0), std::vector<double>(nc, 0.0), 0.0};
    const double n = static_cast<double>(phi.pixels());
    for (std::size_t i = 0; i < phi.pixels(); ++i) {
        const auto f = phi.pixel(i);
        const auto p = pixel_probs(theta, f);
        const auto t = target.pixel(i);
        // dL/dz_c = sum_k dL/dp_k * p_k * (delta_kc - p_c)
        for (std::size_t c = 0; c < nc; ++c) {
            double dz = 0.0;
            for (std::size_t k = 0; k < nc; ++k) {
                const double dp = weight * 2.0 * (p[k] - t[k]) / n;
                dz += dp * p[k] * ((k == c ? 1.0 : 0.0) - p[c]);
            }
            for (std::size_t k = 0; k < nf; ++k) g.weights[c * nf + k] += dz * f[k];
            g.bias[c] += dz;
            g.loss += weight * (p[c] - t[c]) * (p[c] - t[c]) / n;
        }
    }
    return g;
}

SoftMask propagate(const ColorImage& query, const TeacherMemory& memory) {
    if (memory.empty()) throw std::invalid_argument("propagate: empty memory");
    const std::size_t nc = memory.classes();
    const double tau = memory.config().temperature;
    const PatchKeys q = encode_patches(query, memory.config().patch_size);
    const std::size_t ps = q.grid.patch_size;
    std::vector<double> out(query.pixels() * nc, 0.0);

    for (std::size_t y = 0; y < query.height(); ++y) {
        for (std::size_t x = 0; x < query.width(); ++x) {
            const std::size_t qp = (y / ps) * q.grid.cols + x / ps;
            const std::size_t ox = x % ps;
            const std::size_t oy = y % ps;
            const double* kq = &q.keys[qp * patch_key_dims];

            std::vector<std::pair<double, std::uint8_t>> scored;
            for (const auto& e : memory.entries()) {
                const PatchGrid& g = e->keys.grid;
                for (std::size_t m = 0; m < g.count(); ++m) {
                    double d = 0;
                    for (std::size_t k = 0; k < patch_key_dims; ++k) {
                        const double diff = kq[k] - e->keys.keys[m * patch_key_dims + k];
                        d += diff * diff;
                    }
                    const std::size_t mc = m % g.cols;
                    const std::size_t mr = m / g.cols;
                    const std::size_t lx = g.x0(mc) + std::min(ox, g.patch_width(mc) - 1);
                    const std::size_t ly = g.y0(mr) + std::min(oy, g.patch_height(mr) - 1);
                    scored.emplace_back(d, e->label.at(lx, ly));
                }
            }
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& s : scored) dmin = std::min(dmin, s.first);
            double z = 0;
            std::vector<double> acc(nc, 0.0);
            for (const auto& [d, label] : scored) {
                const double w = std::exp(-(d - dmin) / tau);
                z += w;
                acc[label] += w;
            }
            for (std::size_t c = 0; c < nc; ++c) out[(y * query.width() + x) * nc + c] = acc[c] / z;
        }
    }
    return SoftMask(query.width(), query.height(), nc, std::move(out));
}

}  // namespace tcd::reference
