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

// End-to-end reproduction harness over the fixed synthetic corpus.
//
// Scenarios, per sequence:
//   full      every frame's ground truth, supervised only (reference row)
//   keyframe  SSIM key frames, supervised only
//   uniform   uniformly spaced key frames (same count as SSIM), with TC training
//   ssim      SSIM key frames with TC training
// The last three run at each threshold in `scenario_thresholds`.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcdistill/config.hpp"
#include "tcdistill/synth.hpp"

namespace tcd {

/// Five 64x64, 40-frame, 3-class sequences with seeds 1..5: eight blobs,
/// 1 px/frame drift, noise std 4.
std::vector<SynthSpec> standard_corpus();

struct ExperimentOptions {
    std::vector<SynthSpec> corpus = standard_corpus();
    std::vector<double> count_thresholds{0.3, 0.4, 0.5, 0.6, 0.7};
    std::vector<double> scenario_thresholds{0.3, 0.4, 0.5, 0.6};
    RunConfig config;
    double tc_margin = 0.02;    ///< ssim TC must beat keyframe TC by this much
    double miou_margin = 0.02;  ///< ssim mIoU may trail keyframe mIoU by at most this much
    /// When set, each generated sequence is written here as seq_<seed>/.
    std::optional<std::filesystem::path> corpus_dir;
};

struct ScenarioRow {
    std::string scenario;
    std::optional<double> threshold;
    double annotations = 0.0;  ///< manual labels, averaged over the corpus
    double miou = 0.0;
    double tc = 0.0;

    bool operator==(const ScenarioRow&) const = default;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;

    bool operator==(const CheckResult&) const = default;
};

struct ExperimentResult {
    /// key_counts[s][i]: sequence s at count_thresholds[i]
    std::vector<std::vector<std::size_t>> key_counts;
    std::vector<ScenarioRow> rows;
    std::vector<CheckResult> checks;
    nlohmann::json report;   ///< contents of report.json
    nlohmann::json history;  ///< contents of history.json

    bool passed() const noexcept;
};

ExperimentResult run_experiment(const ExperimentOptions& options);

/// Writes report.json and history.json into `out_dir` (created if needed).
void write_experiment(const ExperimentResult& result, const std::filesystem::path& out_dir);

/// Plain-text key-frame-count table, scenario table and check lines.
std::string format_summary(const ExperimentOptions& options, const ExperimentResult& result);

}  // namespace tcd
