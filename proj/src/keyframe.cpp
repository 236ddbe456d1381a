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

#include "tcdistill/keyframe.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcd {

SelectionResult SelectionResult::from_indices(std::vector<std::size_t> keys, std::size_t num_frames,
                                              std::optional<double> threshold) {
    SelectionResult r;
    r.is_key.assign(num_frames, false);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i] >= num_frames) throw std::invalid_argument("selection: key index out of range");
        if (i > 0 && keys[i] <= keys[i - 1]) throw std::invalid_argument("selection: key indices not increasing");
        r.is_key[keys[i]] = true;
    }
    if (keys.empty() || keys.front() != 0) throw std::invalid_argument("selection: frame 0 must be a key frame");
    r.key_indices = std::move(keys);
    r.threshold = threshold;
    return r;
}

SelectionResult select_keyframes(const VideoSequence& seq, double threshold, const SsimParams& p) {
    if (seq.empty()) throw std::invalid_argument("select_keyframes: empty sequence");
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("select_keyframes: threshold must lie in (0, 1)");
    }
    p.validate();

    std::vector<std::size_t> keys{0};
    GrayImage anchor = to_gray(seq.frame(0));
    for (std::size_t t = 1; t < seq.size(); ++t) {
        GrayImage current = to_gray(seq.frame(t));
        if (compute_ssim(anchor, current, p) < threshold) {
            keys.push_back(t);
            anchor = std::move(current);
        }
    }
    return SelectionResult::from_indices(std::move(keys), seq.size(), threshold);
}

SelectionResult select_uniform(std::size_t num_frames, std::size_t n) {
    if (n < 1 || n > num_frames) {
        throw std::invalid_argument("select_uniform: n=" + std::to_string(n) + " outside [1, " +
                                    std::to_string(num_frames) + "]");
    }
    std::vector<std::size_t> keys{0};
    if (n > 1) {
        const double span = static_cast<double>(num_frames - 1);
        for (std::size_t i = 1; i < n; ++i) {
            const auto k = static_cast<std::size_t>(
                std::floor(static_cast<double>(i) * span / static_cast<double>(n - 1) + 0.5));
            if (k != keys.back()) keys.push_back(k);
        }
    }
    return SelectionResult::from_indices(std::move(keys), num_frames);
}

}  // namespace tcd
