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
#include <map>
#include <optional>
#include <set>
#include <string>

#include "tcdistill/image.hpp"

namespace tcd {

enum class Provenance { manual, pseudo };

const char* to_string(Provenance p) noexcept;

struct LabelEntry {
    ClassMask mask;
    Provenance provenance = Provenance::manual;
};

/// Evolving key set K with its label bank and the temporal set T.
///
/// Invariants, checked by invariant_violation():
///   - K and T are disjoint, every key has a label, only keys have labels;
///   - successor closure: for k in K with k+1 < N, k+1 is in K or T;
///   - manual labels are never replaced.
class KeyFrameStore {
public:
    /// Seeds K with manually labelled frames. T starts empty.
    KeyFrameStore(std::size_t num_frames, std::map<std::size_t, ClassMask> manual_labels);

    std::size_t num_frames() const noexcept { return num_frames_; }
    const std::set<std::size_t>& keys() const noexcept { return keys_; }
    const std::set<std::size_t>& temporal() const noexcept { return temporal_; }
    const std::map<std::size_t, LabelEntry>& labels() const noexcept { return labels_; }
    const LabelEntry& label(std::size_t frame) const { return labels_.at(frame); }

    /// T <- { k+1 : k in K, k+1 < N, k+1 not in K }. Idempotent.
    void build_temporal_set();

    /// Moves t from T into K with a pseudo label and extends T with t+1.
    /// Throws std::invalid_argument if t is not in T or would overwrite a manual label.
    void promote(std::size_t t, ClassMask pseudo);

    std::optional<std::string> invariant_violation() const;

private:
    std::size_t num_frames_;
    std::set<std::size_t> keys_;
    std::set<std::size_t> temporal_;
    std::map<std::size_t, LabelEntry> labels_;
};

}  // namespace tcd
