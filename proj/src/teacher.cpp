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

#include "tcdistill/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tcdistill/parallel.hpp"

namespace tcd {

void TeacherConfig::validate() const {
    if (patch_size < 1) throw std::invalid_argument("teacher: patch_size must be >= 1");
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("teacher: temperature must be > 0");
    }
}

PatchGrid::PatchGrid(std::size_t w, std::size_t h, std::size_t ps)
    : width(w), height(h), patch_size(ps), cols((w + ps - 1) / ps), rows((h + ps - 1) / ps) {}

PatchKeys encode_patches(const ColorImage& img, std::size_t patch_size) {
    PatchKeys out;
    out.grid = PatchGrid(img.width(), img.height(), patch_size);
    out.keys.resize(out.grid.count() * patch_key_dims);
    const GrayImage luma = to_gray(img);
    const double xs = img.width() > 1 ? 1.0 / static_cast<double>(img.width() - 1) : 0.0;
    const double ys = img.height() > 1 ? 1.0 / static_cast<double>(img.height() - 1) : 0.0;

    for (std::size_t r = 0; r < out.grid.rows; ++r) {
        for (std::size_t c = 0; c < out.grid.cols; ++c) {
            const std::size_t pw = out.grid.patch_width(c);
            const std::size_t ph = out.grid.patch_height(r);
            double sr = 0, sg = 0, sb = 0, sl = 0, sll = 0;
            for (std::size_t y = out.grid.y0(r); y < out.grid.y0(r) + ph; ++y) {
                for (std::size_t x = out.grid.x0(c); x < out.grid.x0(c) + pw; ++x) {
                    sr += img.at(x, y, 0);
                    sg += img.at(x, y, 1);
                    sb += img.at(x, y, 2);
                    const double l = luma.at(x, y);
                    sl += l;
                    sll += l * l;
                }
            }
            const double n = static_cast<double>(pw * ph);
            const double mean_l = sl / n;
            double* k = &out.keys[(r * out.grid.cols + c) * patch_key_dims];
            k[0] = sr / n / 255.0;
            k[1] = sg / n / 255.0;
            k[2] = sb / n / 255.0;
            k[3] = std::sqrt(std::max(0.0, sll / n - mean_l * mean_l)) / 127.5;
            k[4] = (static_cast<double>(out.grid.x0(c)) + static_cast<double>(pw - 1) / 2.0) * xs;
            k[5] = (static_cast<double>(out.grid.y0(r)) + static_cast<double>(ph - 1) / 2.0) * ys;
        }
    }
    return out;
}

TeacherMemory::TeacherMemory(TeacherConfig config, std::size_t classes) : config_(config), classes_(classes) {
    config_.validate();
    if (classes_ < 1) throw std::invalid_argument("teacher: classes must be >= 1");
}

std::shared_ptr<const MemoryEntry> TeacherMemory::encode(std::size_t frame_index, const ColorImage& frame,
                                                         const ClassMask& label, const TeacherConfig& config) {
    config.validate();
    if (frame.width() != label.width() || frame.height() != label.height()) {
        throw std::invalid_argument("teacher: label dimensions differ from frame");
    }
    auto e = std::make_shared<MemoryEntry>();
    e->frame_index = frame_index;
    e->frame = frame;
    e->label = label;
    e->keys = encode_patches(frame, config.patch_size);
    const PatchGrid& g = e->keys.grid;
    const std::size_t ps = g.patch_size;
    e->values.resize(g.count() * ps * ps);
    for (std::size_t m = 0; m < g.count(); ++m) {
        const std::size_t mc = m % g.cols;
        const std::size_t mr = m / g.cols;
        for (std::size_t oy = 0; oy < ps; ++oy) {
            for (std::size_t ox = 0; ox < ps; ++ox) {
                const std::size_t lx = g.x0(mc) + std::min(ox, g.patch_width(mc) - 1);
                const std::size_t ly = g.y0(mr) + std::min(oy, g.patch_height(mr) - 1);
                e->values[(m * ps + oy) * ps + ox] = label.at(lx, ly);
            }
        }
    }
    return e;
}

void TeacherMemory::add(std::shared_ptr<const MemoryEntry> entry) {
    if (!entry) throw std::invalid_argument("teacher: null memory entry");
    if (entry->label.classes() != classes_) throw std::invalid_argument("teacher: memory label class count mismatch");
    if (entry->keys.grid.patch_size != config_.patch_size) {
        throw std::invalid_argument("teacher: memory entry encoded with a different patch size");
    }
    if (!entries_.empty() && (entry->frame.width() != entries_.front()->frame.width() ||
                              entry->frame.height() != entries_.front()->frame.height())) {
        throw std::invalid_argument("teacher: memory frames differ in dimensions");
    }
    entries_.push_back(std::move(entry));
}

std::vector<std::size_t> TeacherMemory::frame_indices() const {
    std::vector<std::size_t> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e->frame_index);
    return out;
}

SoftMask propagate(const ColorImage& query, const TeacherMemory& memory) {
    if (memory.empty()) throw std::invalid_argument("propagate: empty memory");
    const auto& front = memory.entries().front()->frame;
    if (front.width() != query.width() || front.height() != query.height()) {
        throw std::invalid_argument("propagate: query dimensions differ from memory frames");
    }
    const double tau = memory.config().temperature;
    const std::size_t nc = memory.classes();
    const PatchKeys q = encode_patches(query, memory.config().patch_size);
    const PatchGrid& grid = q.grid;

    const std::size_t ps = memory.config().patch_size;
    const std::size_t block = ps * ps;
    std::size_t total = 0;
    for (const auto& e : memory.entries()) total += e->keys.grid.count();

    std::vector<double> out(query.pixels() * nc, 0.0);
    parallel_for(grid.count(), [&](std::size_t qp) {
        const double* kq = &q.keys[qp * patch_key_dims];
        std::vector<double> weight(total);
        double dmin = std::numeric_limits<double>::infinity();
        std::size_t j = 0;
        for (const auto& e : memory.entries()) {
            const auto& keys = e->keys.keys;
            for (std::size_t m = 0; m < e->keys.grid.count(); ++m, ++j) {
                double d = 0.0;
                for (std::size_t k = 0; k < patch_key_dims; ++k) {
                    const double diff = kq[k] - keys[m * patch_key_dims + k];
                    d += diff * diff;
                }
                weight[j] = d;
                dmin = std::min(dmin, d);
            }
        }
        double z = 0.0;
        for (double& w : weight) {
            w = std::exp(-(w - dmin) / tau);
            z += w;
        }

        // acc[o * nc + c], o = oy * ps + ox; each (o, c) sums in memory order
        std::vector<double> acc(block * nc, 0.0);
        j = 0;
        for (const auto& e : memory.entries()) {
            const std::uint8_t* labels = e->values.data();
            for (std::size_t m = 0; m < e->keys.grid.count(); ++m, ++j) {
                const double w = weight[j];
                const std::uint8_t* lab = labels + m * block;
                for (std::size_t o = 0; o < block; ++o) acc[o * nc + lab[o]] += w;
            }
        }

        const std::size_t qc = qp % grid.cols;
        const std::size_t qr = qp / grid.cols;
        for (std::size_t oy = 0; oy < grid.patch_height(qr); ++oy) {
            for (std::size_t ox = 0; ox < grid.patch_width(qc); ++ox) {
                const std::size_t pix = (grid.y0(qr) + oy) * grid.width + grid.x0(qc) + ox;
                const double* a = &acc[(oy * ps + ox) * nc];
                for (std::size_t c = 0; c < nc; ++c) out[pix * nc + c] = a[c] / z;
            }
        }
    });
    return SoftMask(query.width(), query.height(), nc, std::move(out));
}

}  // namespace tcd
