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

// JSON forms of the artifacts the CLI reads and writes:
//
//   selection.json  {"threshold": s | null, "key_indices": [...], "count": k}
//   student.json    {"classes": C, "features": F, "weights": [C*F row-major], "bias": [C]}
//   store.json      {"num_frames", "key_indices", "temporal_indices",
//                    "labels": [{"frame", "provenance", "checksum"}],
//                    "promotions": [{"frame", "round", "gate_miou", "tc_loss"}]}
//   history.json    {"stop_reason", "rounds": [...]}
//   report.json     EvalReport
//
// Doubles are written in shortest round-trip form, so parse(dump(x)) == x.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tcdistill/keyframe.hpp"
#include "tcdistill/metrics.hpp"
#include "tcdistill/ssim.hpp"
#include "tcdistill/store.hpp"
#include "tcdistill/student.hpp"
#include "tcdistill/synth.hpp"
#include "tcdistill/teacher.hpp"
#include "tcdistill/trainer.hpp"

namespace tcd {

/// FNV-1a 64 over the label bytes, as 16 hex digits.
std::string mask_checksum(const ClassMask& m);

void to_json(nlohmann::json& j, const SsimParams& p);
void from_json(const nlohmann::json& j, SsimParams& p);
void to_json(nlohmann::json& j, const TeacherConfig& c);
void from_json(const nlohmann::json& j, TeacherConfig& c);
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const EvalConfig& c);
void from_json(const nlohmann::json& j, EvalConfig& c);
void to_json(nlohmann::json& j, const SynthSpec& s);

void to_json(nlohmann::json& j, const SelectionResult& s);
/// Needs the sequence length to rebuild per-frame flags.
SelectionResult selection_from_json(const nlohmann::json& j, std::size_t num_frames);

void to_json(nlohmann::json& j, const StudentParams& p);
void from_json(const nlohmann::json& j, StudentParams& p);

void to_json(nlohmann::json& j, const TemporalFrameRecord& r);
void from_json(const nlohmann::json& j, TemporalFrameRecord& r);
void to_json(nlohmann::json& j, const RoundRecord& r);
void from_json(const nlohmann::json& j, RoundRecord& r);
void to_json(nlohmann::json& j, const TrainingHistory& h);
void from_json(const nlohmann::json& j, TrainingHistory& h);

/// store.json; the promotion log is taken from the history.
nlohmann::json store_to_json(const KeyFrameStore& store, const TrainingHistory& history);

void to_json(nlohmann::json& j, const EvalReport& r);
void from_json(const nlohmann::json& j, EvalReport& r);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace tcd
