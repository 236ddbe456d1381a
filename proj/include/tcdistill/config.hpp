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

// Run configuration. The JSON form mirrors the struct:
//
//   {
//     "ssim":      {"window": 11, "gaussian_sigma": 1.5, "k1": 0.01, "k2": 0.03, "dynamic_range": 255},
//     "selection": {"mode": "ssim" | "uniform", "threshold": 0.5, "uniform_count": 1},
//     "train":     {"alpha": 0.5, "tc_threshold": 0.9, "learning_rate": 0.5,
//                   "epochs_per_round": 50, "max_rounds": 10, "seed": 0},
//     "teacher":   {"patch_size": 4, "temperature": 0.001},
//     "eval":      {"patch_size": 4, "temperature": 0.001}
//   }
//
// A config file may give any subset; missing fields keep their defaults and
// unknown fields are rejected. Dotted overrides ("train.alpha" = "0.3") are
// applied on top.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tcdistill/metrics.hpp"
#include "tcdistill/ssim.hpp"
#include "tcdistill/teacher.hpp"
#include "tcdistill/trainer.hpp"

namespace tcd {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SelectionConfig {
    std::string mode = "ssim";
    double threshold = 0.5;
    std::size_t uniform_count = 1;

    bool operator==(const SelectionConfig&) const = default;
};

struct RunConfig {
    SsimParams ssim;
    SelectionConfig selection;
    TrainConfig train;
    TeacherConfig teacher;
    EvalConfig eval;

    /// Throws ConfigError on any out-of-range value.
    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Strict parse of a (possibly partial) config object over the defaults.
RunConfig parse_run_config(const nlohmann::json& j);

/// Sets "a.b.c" in a config object. The value is parsed as JSON when possible
/// ("0.5", "true", "[1,2]"), otherwise taken as a string.
void apply_override(nlohmann::json& j, const std::string& dotted_key, const std::string& value);

RunConfig load_run_config(const std::optional<std::filesystem::path>& file,
                          const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace tcd
