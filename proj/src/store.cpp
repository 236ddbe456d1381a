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

#include "tcdistill/store.hpp"

#include <stdexcept>

namespace tcd {

const char* to_string(Provenance p) noexcept {
    return p == Provenance::manual ? "manual" : "pseudo";
}

KeyFrameStore::KeyFrameStore(std::size_t num_frames, std::map<std::size_t, ClassMask> manual_labels)
    : num_frames_(num_frames) {
    if (manual_labels.empty()) throw std::invalid_argument("store: at least one labelled key frame is required");
    for (auto& [frame, mask] : manual_labels) {
        if (frame >= num_frames_) throw std::invalid_argument("store: key index beyond sequence length");
        keys_.insert(frame);
        labels_.emplace(frame, LabelEntry{std::move(mask), Provenance::manual});
    }
}

void KeyFrameStore::build_temporal_set() {
    for (std::size_t k : keys_) {
        const std::size_t next = k + 1;
        if (next < num_frames_ && !keys_.contains(next)) temporal_.insert(next);
    }
}

void KeyFrameStore::promote(std::size_t t, ClassMask pseudo) {
    if (!temporal_.contains(t)) {
        throw std::invalid_argument("store: frame " + std::to_string(t) + " is not in the temporal set");
    }
    if (auto it = labels_.find(t); it != labels_.end() && it->second.provenance == Provenance::manual) {
        throw std::invalid_argument("store: refusing to overwrite manual label of frame " + std::to_string(t));
    }
    temporal_.erase(t);
    keys_.insert(t);
    labels_[t] = LabelEntry{std::move(pseudo), Provenance::pseudo};
    const std::size_t next = t + 1;
    if (next < num_frames_ && !keys_.contains(next)) temporal_.insert(next);
}

std::optional<std::string> KeyFrameStore::invariant_violation() const {
    for (std::size_t t : temporal_) {
        if (keys_.contains(t)) return "frame " + std::to_string(t) + " is in both K and T";
        if (t >= num_frames_) return "temporal frame " + std::to_string(t) + " out of range";
    }
    for (std::size_t k : keys_) {
        if (!labels_.contains(k)) return "key frame " + std::to_string(k) + " has no label";
        const std::size_t next = k + 1;
        if (next < num_frames_ && !keys_.contains(next) && !temporal_.contains(next)) {
            return "successor " + std::to_string(next) + " of key " + std::to_string(k) + " is in neither K nor T";
        }
    }
    for (const auto& [frame, entry] : labels_) {
        if (!keys_.contains(frame)) return "label for non-key frame " + std::to_string(frame);
    }
    return std::nullopt;
}

}  // namespace tcd
