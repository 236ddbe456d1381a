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

#include "tcdistill/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcdistill/rng.hpp"

namespace tcd {

namespace {

constexpr std::array<std::array<double, 3>, 6> palette = {{
    {96.0, 112.0, 88.0},    // background: vegetation
    {168.0, 150.0, 110.0},  // exposed ground
    {64.0, 92.0, 148.0},    // water
    {140.0, 120.0, 150.0},
    {190.0, 190.0, 180.0},
    {50.0, 60.0, 50.0},
}};

struct Blob {
    double cx, cy;  // center at frame 0
    double rx, ry;  // semi-axes
    double vx, vy;  // velocity, px/frame
    std::uint8_t cls;
};

// Signed toroidal difference a - b in [-period/2, period/2).
double wrap_delta(double a, double b, double period) {
    double d = std::fmod(a - b, period);
    if (d < -period / 2) d += period;
    if (d >= period / 2) d -= period;
    return d;
}

double round_half_up(double v) { return std::floor(v + 0.5); }

std::vector<Blob> place_blobs(const SynthSpec& spec) {
    Engine e(mix_seed(spec.seed));
    const double w = static_cast<double>(spec.width);
    const double h = static_cast<double>(spec.height);
    const double extent = static_cast<double>(std::min(spec.width, spec.height));
    std::vector<Blob> blobs;
    blobs.reserve(spec.num_blobs);
    for (std::size_t b = 0; b < spec.num_blobs; ++b) {
        Blob blob{};
        blob.cx = uniform(e, 0.0, w);
        blob.cy = uniform(e, 0.0, h);
        blob.rx = std::max(1.0, uniform(e, 0.10, 0.22) * extent);
        blob.ry = std::max(1.0, uniform(e, 0.10, 0.22) * extent);
        // uniform direction by rejection, normalized with sqrt only
        double dx = 0.0, dy = 0.0, norm2 = 0.0;
        do {
            dx = uniform(e, -1.0, 1.0);
            dy = uniform(e, -1.0, 1.0);
            norm2 = dx * dx + dy * dy;
        } while (norm2 > 1.0 || norm2 < 1e-6);
        const double norm = std::sqrt(norm2);
        blob.vx = spec.drift_px_per_frame * dx / norm;
        blob.vy = spec.drift_px_per_frame * dy / norm;
        blob.cls = static_cast<std::uint8_t>(1 + b % (spec.classes - 1));
        blobs.push_back(blob);
    }
    return blobs;
}

}  // namespace

void SynthSpec::validate() const {
    if (width == 0 || height == 0) throw std::invalid_argument("synth: zero-area frames");
    if (num_frames == 0) throw std::invalid_argument("synth: num_frames must be >= 1");
    if (classes < 2) throw std::invalid_argument("synth: classes must be >= 2");
    if (classes > ClassMask::max_classes) throw std::invalid_argument("synth: classes must be <= 256");
    if (num_blobs < 1) throw std::invalid_argument("synth: num_blobs must be >= 1");
    if (!(drift_px_per_frame >= 0.0) || !std::isfinite(drift_px_per_frame)) {
        throw std::invalid_argument("synth: drift must be finite and >= 0");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw std::invalid_argument("synth: noise_std must be finite and >= 0");
    }
}

std::array<double, 3> class_color(std::size_t cls) {
    if (cls < palette.size()) return palette[cls];
    // beyond the fixed palette: hashed, kept away from the extremes
    const std::uint64_t hsh = mix_seed(cls);
    return {40.0 + static_cast<double>(hsh & 0xFF) * (175.0 / 255.0),
            40.0 + static_cast<double>((hsh >> 8) & 0xFF) * (175.0 / 255.0),
            40.0 + static_cast<double>((hsh >> 16) & 0xFF) * (175.0 / 255.0)};
}

VideoSequence generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    const auto blobs = place_blobs(spec);
    Engine noise(mix_seed(spec.seed ^ 0x6E6F697365ULL));

    const std::size_t w = spec.width;
    const std::size_t h = spec.height;
    const double wd = static_cast<double>(w);
    const double hd = static_cast<double>(h);

    std::vector<ColorImage> frames;
    std::vector<ClassMask> truth;
    frames.reserve(spec.num_frames);
    truth.reserve(spec.num_frames);

    for (std::size_t t = 0; t < spec.num_frames; ++t) {
        const double td = static_cast<double>(t);
        std::vector<std::uint8_t> labels(w * h, 0);
        for (const auto& b : blobs) {
            const double cx = b.cx + round_half_up(b.vx * td);
            const double cy = b.cy + round_half_up(b.vy * td);
            for (std::size_t y = 0; y < h; ++y) {
                const double dy = wrap_delta(static_cast<double>(y), cy, hd) / b.ry;
                for (std::size_t x = 0; x < w; ++x) {
                    const double dx = wrap_delta(static_cast<double>(x), cx, wd) / b.rx;
                    if (dx * dx + dy * dy <= 1.0) labels[y * w + x] = b.cls;
                }
            }
        }

        std::vector<double> rgb(3 * w * h);
        for (std::size_t i = 0; i < w * h; ++i) {
            const auto color = class_color(labels[i]);
            for (std::size_t c = 0; c < 3; ++c) {
                double v = color[c];
                if (spec.noise_std > 0.0) v += spec.noise_std * standard_normal(noise);
                rgb[3 * i + c] = std::clamp(v, 0.0, 255.0);
            }
        }
        frames.emplace_back(w, h, std::move(rgb));
        truth.emplace_back(w, h, spec.classes, std::move(labels));
    }
    return VideoSequence(std::move(frames), std::move(truth), spec.classes);
}

}  // namespace tcd
