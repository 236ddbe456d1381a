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

// Teacher mask propagator: a frozen memory of labelled frames read out by
// patch-similarity attention.
//
// Frames are tiled into patch_size x patch_size patches (the last row/column
// may be narrower). Each patch has a key
//
//   [mean R, mean G, mean B] / 255, luma std / 127.5, [center x, center y] in [0,1]
//
// and its value is the one-hot label of every pixel it covers. A query patch q
// attends to every memory patch j with
//
//   a(q, j) = exp(-||k_q - k_j||^2 / tau) / Z,   Z = sum_j exp(-||k_q - k_j||^2 / tau)
//
// and pixel o of q receives sum_j a(q, j) * onehot(label of pixel o in patch j).
// Offsets that fall outside a narrower memory patch are clamped to its extent.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "tcdistill/image.hpp"

namespace tcd {

inline constexpr std::size_t patch_key_dims = 6;

struct TeacherConfig {
    std::size_t patch_size = 4;
    double temperature = 1e-3;

    void validate() const;
    bool operator==(const TeacherConfig&) const = default;
};

struct PatchGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t patch_size = 0;
    std::size_t cols = 0;
    std::size_t rows = 0;

    PatchGrid() = default;
    PatchGrid(std::size_t width, std::size_t height, std::size_t patch_size);

    std::size_t count() const noexcept { return cols * rows; }
    std::size_t x0(std::size_t col) const noexcept { return col * patch_size; }
    std::size_t y0(std::size_t row) const noexcept { return row * patch_size; }
    std::size_t patch_width(std::size_t col) const noexcept {
        return col + 1 < cols ? patch_size : width - x0(col);
    }
    std::size_t patch_height(std::size_t row) const noexcept {
        return row + 1 < rows ? patch_size : height - y0(row);
    }
};

/// Patch keys of one frame, count() x patch_key_dims.
struct PatchKeys {
    PatchGrid grid;
    std::vector<double> keys;
};

PatchKeys encode_patches(const ColorImage& img, std::size_t patch_size);

struct MemoryEntry {
    std::size_t frame_index = 0;
    ColorImage frame;
    ClassMask label;
    PatchKeys keys;
    /// count() x patch_size^2 labels: value of pixel offset (ox, oy) of each
    /// patch, offsets clamped to the patch extent.
    std::vector<std::uint8_t> values;
};

class TeacherMemory {
public:
    TeacherMemory(TeacherConfig config, std::size_t classes);

    /// Encodes a (frame, label) pair once so it can be shared by many memories.
    static std::shared_ptr<const MemoryEntry> encode(std::size_t frame_index, const ColorImage& frame,
                                                     const ClassMask& label, const TeacherConfig& config);

    /// Throws std::invalid_argument on class-count, patch-size or dimension mismatch.
    void add(std::shared_ptr<const MemoryEntry> entry);

    const TeacherConfig& config() const noexcept { return config_; }
    std::size_t classes() const noexcept { return classes_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<std::shared_ptr<const MemoryEntry>>& entries() const noexcept { return entries_; }
    std::vector<std::size_t> frame_indices() const;

private:
    TeacherConfig config_;
    std::size_t classes_;
    std::vector<std::shared_ptr<const MemoryEntry>> entries_;
};

/// Reads the memory out onto `query`. Query patches are processed in parallel.
SoftMask propagate(const ColorImage& query, const TeacherMemory& memory);

}  // namespace tcd
