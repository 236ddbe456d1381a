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

#include "tcdistill/config.hpp"

#include "tcdistill/serialize.hpp"

namespace tcd {

using nlohmann::json;

namespace {

// Every key of `given` must exist in `schema` with a compatible type.
void check_shape(const json& given, const json& schema, const std::string& path) {
    if (!given.is_object()) throw ConfigError("config: " + (path.empty() ? "root" : path) + " must be an object");
    for (const auto& [key, value] : given.items()) {
        const std::string here = path.empty() ? key : path + "." + key;
        if (!schema.contains(key)) throw ConfigError("config: unknown field \"" + here + "\"");
        const json& expect = schema.at(key);
        if (expect.is_object()) {
            check_shape(value, expect, here);
        } else if (expect.is_number() && !value.is_number()) {
            throw ConfigError("config: field \"" + here + "\" must be a number");
        } else if (expect.is_number_unsigned() && !value.is_number_unsigned()) {
            throw ConfigError("config: field \"" + here + "\" must be a non-negative integer");
        } else if (expect.is_string() && !value.is_string()) {
            throw ConfigError("config: field \"" + here + "\" must be a string");
        }
    }
}

}  // namespace

void RunConfig::validate() const {
    try {
        ssim.validate();
        train.validate();
        teacher.validate();
        eval.propagator.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (selection.mode != "ssim" && selection.mode != "uniform") {
        throw ConfigError("config: selection.mode must be \"ssim\" or \"uniform\"");
    }
    if (!(selection.threshold > 0.0 && selection.threshold < 1.0)) {
        throw ConfigError("config: selection.threshold must lie in (0, 1)");
    }
    if (selection.uniform_count < 1) throw ConfigError("config: selection.uniform_count must be >= 1");
}

json to_json(const RunConfig& cfg) {
    return json{{"ssim", cfg.ssim},
                {"selection",
                 {{"mode", cfg.selection.mode},
                  {"threshold", cfg.selection.threshold},
                  {"uniform_count", cfg.selection.uniform_count}}},
                {"train", cfg.train},
                {"teacher", cfg.teacher},
                {"eval", cfg.eval}};
}

RunConfig parse_run_config(const json& j) {
    const json defaults = to_json(RunConfig{});
    check_shape(j, defaults, "");
    json merged = defaults;
    merged.merge_patch(j);
    RunConfig cfg;
    try {
        merged.at("ssim").get_to(cfg.ssim);
        cfg.selection.mode = merged.at("selection").at("mode").get<std::string>();
        cfg.selection.threshold = merged.at("selection").at("threshold").get<double>();
        cfg.selection.uniform_count = merged.at("selection").at("uniform_count").get<std::size_t>();
        merged.at("train").get_to(cfg.train);
        merged.at("teacher").get_to(cfg.teacher);
        merged.at("eval").get_to(cfg.eval);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

void apply_override(json& j, const std::string& dotted_key, const std::string& value) {
    if (dotted_key.empty()) throw ConfigError("config: empty override key");
    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted_key.find('.', start);
        const std::string part = dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("config: malformed override key \"" + dotted_key + "\"");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[part];
        if (!node->is_null() && !node->is_object()) {
            throw ConfigError("config: override \"" + dotted_key + "\" descends into a scalar");
        }
        start = dot + 1;
    }
}

RunConfig load_run_config(const std::optional<std::filesystem::path>& file,
                          const std::vector<std::pair<std::string, std::string>>& overrides) {
    json j = json::object();
    if (file) {
        try {
            j = read_json_file(*file);
        } catch (const std::runtime_error& e) {
            throw ConfigError(e.what());
        }
    }
    for (const auto& [key, value] : overrides) apply_override(j, key, value);
    return parse_run_config(j);
}

}  // namespace tcd
