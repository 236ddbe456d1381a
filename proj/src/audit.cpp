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

#include "tcdistill/audit.hpp"

#include <map>
#include <set>

#include "tcdistill/serialize.hpp"

namespace tcd {

using nlohmann::json;

AuditReport audit_training(const json& store, const json& history, const VideoSequence& annotated,
                           const SelectionResult& selection, double tc_threshold) {
    AuditReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    try {
        const auto n = store.at("num_frames").get<std::size_t>();
        const auto keys = store.at("key_indices").get<std::set<std::size_t>>();
        const auto temporal = store.at("temporal_indices").get<std::set<std::size_t>>();

        // successor closure and disjointness
        for (std::size_t k : keys) {
            if (temporal.contains(k)) fail("frame " + std::to_string(k) + " is in both K and T");
            if (k + 1 < n && !keys.contains(k + 1) && !temporal.contains(k + 1)) {
                fail("successor closure broken after key " + std::to_string(k));
            }
        }

        // manual labels: exactly the selection, unchanged
        std::map<std::size_t, std::string> provenance;
        for (const auto& l : store.at("labels")) {
            const auto frame = l.at("frame").get<std::size_t>();
            const auto prov = l.at("provenance").get<std::string>();
            provenance[frame] = prov;
            if (!keys.contains(frame)) fail("label stored for non-key frame " + std::to_string(frame));
            if (prov == "manual") {
                if (!selection.is_key.at(frame)) fail("manual label on unselected frame " + std::to_string(frame));
                if (l.at("checksum").get<std::string>() != mask_checksum(annotated.truth(frame))) {
                    fail("manual label of frame " + std::to_string(frame) + " was modified");
                }
            }
        }
        for (std::size_t k : selection.key_indices) {
            if (provenance[k] != "manual") fail("selected key " + std::to_string(k) + " lost its manual label");
        }

        // promotions: logged, gated, and consistent with the store
        std::map<std::size_t, double> logged;
        for (const auto& p : store.at("promotions")) {
            const auto frame = p.at("frame").get<std::size_t>();
            const auto gate = p.at("gate_miou").get<double>();
            ++report.promotions_checked;
            if (!(gate > tc_threshold)) {
                fail("promotion of frame " + std::to_string(frame) + " with gate " + std::to_string(gate) +
                     " <= threshold");
            }
            if (logged.contains(frame)) fail("frame " + std::to_string(frame) + " promoted twice");
            logged[frame] = gate;
            if (provenance[frame] != "pseudo") fail("promoted frame " + std::to_string(frame) + " has no pseudo label");
        }
        for (const auto& [frame, prov] : provenance) {
            if (prov == "pseudo" && !logged.contains(frame)) {
                fail("pseudo label of frame " + std::to_string(frame) + " has no logged promotion");
            }
        }

        // replay K round by round and check every teacher memory
        const TrainingHistory h = history.get<TrainingHistory>();
        std::set<std::size_t> live(selection.key_indices.begin(), selection.key_indices.end());
        for (const auto& round : h.rounds) {
            for (const auto& tr : round.temporal) {
                ++report.memories_checked;
                std::vector<std::size_t> expected;
                for (std::size_t k : live) {
                    if (k < tr.frame) expected.push_back(k);
                }
                for (std::size_t m : tr.memory) {
                    if (m >= tr.frame) {
                        fail("round " + std::to_string(round.round) + ": memory for frame " + std::to_string(tr.frame) +
                             " contains frame " + std::to_string(m));
                    }
                }
                if (tr.memory != expected) {
                    fail("round " + std::to_string(round.round) + ": memory for frame " + std::to_string(tr.frame) +
                         " differs from the key frames preceding it");
                }
                if (tr.promoted) {
                    if (!(tr.gate_miou > tc_threshold)) {
                        fail("history promotes frame " + std::to_string(tr.frame) + " below the gate");
                    }
                    auto it = logged.find(tr.frame);
                    if (it == logged.end() || it->second != tr.gate_miou) {
                        fail("history promotion of frame " + std::to_string(tr.frame) + " missing from store.json");
                    }
                } else if (tr.gate_miou > tc_threshold) {
                    fail("frame " + std::to_string(tr.frame) + " passed the gate but was not promoted");
                }
            }
            live.insert(round.promotions.begin(), round.promotions.end());
        }
        if (live != keys) fail("replayed key set differs from store.json key_indices");
    } catch (const std::exception& e) {
        fail(std::string("malformed store/history: ") + e.what());
    }
    return report;
}

}  // namespace tcd
