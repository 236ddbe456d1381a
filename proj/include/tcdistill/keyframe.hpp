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
#include <optional>
#include <vector>

#include "tcdistill/image.hpp"
#include "tcdistill/ssim.hpp"

namespace tcd {

/// Partition of a sequence into key frames (to be annotated) and the rest.
struct SelectionResult {
    std::vector<std::size_t> key_indices;  ///< strictly increasing, starts at 0
    std::vector<bool> is_key;              ///< one flag per frame
    std::optional<double> threshold;       ///< set for SSIM selection

    std::size_t count() const noexcept { return key_indices.size(); }
    std::size_t num_frames() const noexcept { return is_key.size(); }

    /// Builds the per-frame flags from a sorted index list.
    static SelectionResult from_indices(std::vector<std::size_t> keys, std::size_t num_frames,
                                        std::optional<double> threshold = std::nullopt);

    bool operator==(const SelectionResult&) const = default;
};

/// Greedy anchor scan: frame 0 is key; a later frame stays non-key while its
/// SSIM against the current anchor is >= threshold, otherwise it becomes key
/// and the new anchor. Threshold must lie in (0, 1).
SelectionResult select_keyframes(const VideoSequence& seq, double threshold, const SsimParams& p = {});

/// Evenly spaced baseline: round(i*(N-1)/(n-1)) for i in [0, n).
SelectionResult select_uniform(std::size_t num_frames, std::size_t n);
inline SelectionResult select_uniform(const VideoSequence& seq, std::size_t n) {
    return select_uniform(seq.size(), n);
}

}  // namespace tcd
