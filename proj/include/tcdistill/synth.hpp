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

#include <array>
#include <cstddef>
#include <cstdint>

#include "tcdistill/image.hpp"

namespace tcd {

/// Parameters of a synthetic moving-ellipse video.
struct SynthSpec {
    std::size_t width = 64;
    std::size_t height = 64;
    std::size_t num_frames = 40;
    std::size_t classes = 3;
    std::size_t num_blobs = 4;
    double drift_px_per_frame = 1.0;
    double noise_std = 0.0;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    bool operator==(const SynthSpec&) const = default;
};

/// Mean RGB color assigned to a class. Class 0 is the background.
std::array<double, 3> class_color(std::size_t cls);

/// Renders the video and its ground truth. Pure function of the spec.
///
/// Each blob is an axis-aligned ellipse with a fixed velocity of magnitude
/// drift_px_per_frame. The rendered offset at frame t is the velocity times t
/// rounded to whole pixels, wrapped toroidally, so each blob's footprint is an
/// exact cyclic shift of its first-frame footprint and its area never changes.
/// Later blobs are drawn on top of earlier ones.
VideoSequence generate_synthetic(const SynthSpec& spec);

}  // namespace tcd
