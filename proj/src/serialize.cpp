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

#include "tcdistill/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tcd {

using nlohmann::json;

std::string mask_checksum(const ClassMask& m) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint8_t b) {
        h ^= b;
        h *= 0x100000001b3ULL;
    };
    for (std::size_t v : {m.width(), m.height(), m.classes()}) {
        for (int s = 0; s < 64; s += 8) mix(static_cast<std::uint8_t>(v >> s));
    }
    for (std::uint8_t b : m.data()) mix(b);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void to_json(json& j, const SsimParams& p) {
    j = json{{"window", p.window},
             {"gaussian_sigma", p.gaussian_sigma},
             {"k1", p.k1},
             {"k2", p.k2},
             {"dynamic_range", p.dynamic_range}};
}

void from_json(const json& j, SsimParams& p) {
    j.at("window").get_to(p.window);
    j.at("gaussian_sigma").get_to(p.gaussian_sigma);
    j.at("k1").get_to(p.k1);
    j.at("k2").get_to(p.k2);
    j.at("dynamic_range").get_to(p.dynamic_range);
}

void to_json(json& j, const TeacherConfig& c) {
    j = json{{"patch_size", c.patch_size}, {"temperature", c.temperature}};
}

void from_json(const json& j, TeacherConfig& c) {
    j.at("patch_size").get_to(c.patch_size);
    j.at("temperature").get_to(c.temperature);
}

void to_json(json& j, const TrainConfig& c) {
    j = json{{"alpha", c.alpha},
             {"tc_threshold", c.tc_threshold},
             {"learning_rate", c.learning_rate},
             {"epochs_per_round", c.epochs_per_round},
             {"max_rounds", c.max_rounds},
             {"seed", c.seed}};
}

void from_json(const json& j, TrainConfig& c) {
    j.at("alpha").get_to(c.alpha);
    j.at("tc_threshold").get_to(c.tc_threshold);
    j.at("learning_rate").get_to(c.learning_rate);
    j.at("epochs_per_round").get_to(c.epochs_per_round);
    j.at("max_rounds").get_to(c.max_rounds);
    j.at("seed").get_to(c.seed);
}

void to_json(json& j, const EvalConfig& c) { j = c.propagator; }

void from_json(const json& j, EvalConfig& c) { j.get_to(c.propagator); }

void to_json(json& j, const SynthSpec& s) {
    j = json{{"width", s.width},
             {"height", s.height},
             {"num_frames", s.num_frames},
             {"classes", s.classes},
             {"num_blobs", s.num_blobs},
             {"drift_px_per_frame", s.drift_px_per_frame},
             {"noise_std", s.noise_std},
             {"seed", s.seed}};
}

void to_json(json& j, const SelectionResult& s) {
    j = json{{"threshold", s.threshold ? json(*s.threshold) : json(nullptr)},
             {"key_indices", s.key_indices},
             {"count", s.count()}};
}

SelectionResult selection_from_json(const json& j, std::size_t num_frames) {
    std::optional<double> threshold;
    if (j.contains("threshold") && !j.at("threshold").is_null()) threshold = j.at("threshold").get<double>();
    auto keys = j.at("key_indices").get<std::vector<std::size_t>>();
    if (j.contains("count") && j.at("count").get<std::size_t>() != keys.size()) {
        throw std::invalid_argument("selection.json: count does not match key_indices");
    }
    return SelectionResult::from_indices(std::move(keys), num_frames, threshold);
}

void to_json(json& j, const StudentParams& p) {
    j = json{{"classes", p.classes}, {"features", p.features}, {"weights", p.weights}, {"bias", p.bias}};
}

void from_json(const json& j, StudentParams& p) {
    j.at("classes").get_to(p.classes);
    j.at("features").get_to(p.features);
    j.at("weights").get_to(p.weights);
    j.at("bias").get_to(p.bias);
    p.validate();
}

void to_json(json& j, const TemporalFrameRecord& r) {
    j = json{{"frame", r.frame},
             {"memory", r.memory},
             {"gate_miou", r.gate_miou},
             {"tc_loss", r.tc_loss},
             {"promoted", r.promoted}};
}

void from_json(const json& j, TemporalFrameRecord& r) {
    j.at("frame").get_to(r.frame);
    j.at("memory").get_to(r.memory);
    j.at("gate_miou").get_to(r.gate_miou);
    j.at("tc_loss").get_to(r.tc_loss);
    j.at("promoted").get_to(r.promoted);
}

void to_json(json& j, const RoundRecord& r) {
    j = json{{"round", r.round},
             {"key_count", r.key_count},
             {"temporal_count", r.temporal_count},
             {"initial_loss", r.initial_loss},
             {"epoch_losses", r.epoch_losses},
             {"j_kf", r.j_kf},
             {"j_tc", r.j_tc},
             {"j_total", r.j_total},
             {"final_step", r.final_step},
             {"temporal", r.temporal},
             {"promotions", r.promotions}};
}

void from_json(const json& j, RoundRecord& r) {
    j.at("round").get_to(r.round);
    j.at("key_count").get_to(r.key_count);
    j.at("temporal_count").get_to(r.temporal_count);
    j.at("initial_loss").get_to(r.initial_loss);
    j.at("epoch_losses").get_to(r.epoch_losses);
    j.at("j_kf").get_to(r.j_kf);
    j.at("j_tc").get_to(r.j_tc);
    j.at("j_total").get_to(r.j_total);
    j.at("final_step").get_to(r.final_step);
    j.at("temporal").get_to(r.temporal);
    j.at("promotions").get_to(r.promotions);
}

void to_json(json& j, const TrainingHistory& h) {
    j = json{{"stop_reason", h.stop_reason}, {"rounds", h.rounds}};
}

void from_json(const json& j, TrainingHistory& h) {
    j.at("stop_reason").get_to(h.stop_reason);
    j.at("rounds").get_to(h.rounds);
}

json store_to_json(const KeyFrameStore& store, const TrainingHistory& history) {
    json labels = json::array();
    for (const auto& [frame, entry] : store.labels()) {
        labels.push_back(
            {{"frame", frame}, {"provenance", to_string(entry.provenance)}, {"checksum", mask_checksum(entry.mask)}});
    }
    json promotions = json::array();
    for (const auto& round : history.rounds) {
        for (const auto& tr : round.temporal) {
            if (!tr.promoted) continue;
            promotions.push_back(
                {{"frame", tr.frame}, {"round", round.round}, {"gate_miou", tr.gate_miou}, {"tc_loss", tr.tc_loss}});
        }
    }
    return json{{"num_frames", store.num_frames()},
                {"key_indices", store.keys()},
                {"temporal_indices", store.temporal()},
                {"labels", labels},
                {"promotions", promotions}};
}

void to_json(json& j, const EvalReport& r) {
    json per_class = json::array();
    for (const auto& v : r.per_class_iou) per_class.push_back(v ? json(*v) : json(nullptr));
    j = json{{"per_class_iou", per_class},
             {"miou", r.miou},
             {"miou_aggregation", "micro"},
             {"tc", r.tc},
             {"tc_trace", r.tc_trace},
             {"frames_evaluated", r.frames_evaluated},
             {"config", r.config}};
}

void from_json(const json& j, EvalReport& r) {
    r.per_class_iou.clear();
    for (const auto& v : j.at("per_class_iou")) {
        r.per_class_iou.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    }
    j.at("miou").get_to(r.miou);
    j.at("tc").get_to(r.tc);
    j.at("tc_trace").get_to(r.tc_trace);
    j.at("frames_evaluated").get_to(r.frames_evaluated);
    j.at("config").get_to(r.config);
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace tcd
