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

// Replays a finished training run from its store.json and history.json and
// reports every broken invariant:
//   - successor closure of the final key/temporal sets;
//   - manual labels identical to the annotations they were seeded from;
//   - every pseudo label backed by a logged promotion whose gate exceeded
//     the threshold;
//   - causality: the teacher memory used for frame t held only frames < t.

#include <string>
#include <vector>

#include <json.hpp>

#include "tcdistill/image.hpp"
#include "tcdistill/keyframe.hpp"

namespace tcd {

struct AuditReport {
    std::vector<std::string> violations;
    std::size_t promotions_checked = 0;
    std::size_t memories_checked = 0;

    bool ok() const noexcept { return violations.empty(); }
};

/// `annotated` supplies the manual labels (ground truth of `selection`'s keys).
AuditReport audit_training(const nlohmann::json& store, const nlohmann::json& history, const VideoSequence& annotated,
                           const SelectionResult& selection, double tc_threshold);

}  // namespace tcd
