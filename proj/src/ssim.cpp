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

#include "tcdistill/ssim.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tcdistill/parallel.hpp"

namespace tcd {

void SsimParams::validate() const {
    if (window < 3 || window % 2 == 0) throw std::invalid_argument("ssim: window must be odd and >= 3");
    if (!(gaussian_sigma > 0.0)) throw std::invalid_argument("ssim: gaussian_sigma must be > 0");
    if (!(k1 > 0.0) || !(k2 > 0.0)) throw std::invalid_argument("ssim: k1 and k2 must be > 0");
    if (!(dynamic_range > 0.0)) throw std::invalid_argument("ssim: dynamic range must be > 0");
}

std::vector<double> gaussian_taps(const SsimParams& p) {
    std::vector<double> taps(p.window);
    const double half = static_cast<double>(p.window / 2);
    double total = 0.0;
    for (std::size_t i = 0; i < p.window; ++i) {
        const double d = static_cast<double>(i) - half;
        taps[i] = std::exp(-(d * d) / (2.0 * p.gaussian_sigma * p.gaussian_sigma));
        total += taps[i];
    }
    for (double& t : taps) t /= total;
    return taps;
}

double compute_ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p) {
    p.validate();
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("ssim: dimension mismatch (" + std::to_string(a.width()) + "x" +
                                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()) + ")");
    }
    if (a.width() < p.window || a.height() < p.window) {
        throw std::invalid_argument("ssim: image smaller than the window");
    }

    const auto taps = gaussian_taps(p);
    const std::size_t win = p.window;
    const std::size_t w = a.width();
    const std::size_t h = a.height();
    const std::size_t out_w = w - win + 1;
    const std::size_t out_h = h - win + 1;
    const auto da = a.data();
    const auto db = b.data();

    // Horizontal pass: five moments per (row, valid column).
    constexpr std::size_t moments = 5;
    std::vector<double> horiz(h * out_w * moments);
    parallel_for(h, [&](std::size_t y) {
        const double* ra = da.data() + y * w;
        const double* rb = db.data() + y * w;
        for (std::size_t x = 0; x < out_w; ++x) {
            double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (std::size_t k = 0; k < win; ++k) {
                const double g = taps[k];
                const double va = ra[x + k];
                const double vb = rb[x + k];
                sa += g * va;
                sb += g * vb;
                saa += g * va * va;
                sbb += g * vb * vb;
                sab += g * va * vb;
            }
            double* o = &horiz[(y * out_w + x) * moments];
            o[0] = sa;
            o[1] = sb;
            o[2] = saa;
            o[3] = sbb;
            o[4] = sab;
        }
    });

    const double c1 = p.c1();
    const double c2 = p.c2();
    std::vector<double> row_sums(out_h);
    parallel_for(out_h, [&](std::size_t y) {
        CompensatedSum row;
        for (std::size_t x = 0; x < out_w; ++x) {
            std::array<double, moments> m{};
            for (std::size_t k = 0; k < win; ++k) {
                const double g = taps[k];
                const double* src = &horiz[((y + k) * out_w + x) * moments];
                for (std::size_t j = 0; j < moments; ++j) m[j] += g * src[j];
            }
            const double mu_a = m[0];
            const double mu_b = m[1];
            const double var_a = m[2] - mu_a * mu_a;
            const double var_b = m[3] - mu_b * mu_b;
            const double cov = m[4] - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            row.add(num / den);
        }
        row_sums[y] = row.value();
    });

    return ordered_sum(row_sums) / static_cast<double>(out_w * out_h);
}

}  // namespace tcd
