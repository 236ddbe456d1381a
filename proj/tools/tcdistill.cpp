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

// tcdistill: synth | ssim | select | train | eval | reproduce
//
// Exit codes: 0 success (reproduce: all checks passed), 1 check or runtime
// failure, 2 usage, config or input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcdistill/config.hpp"
#include "tcdistill/dataset_io.hpp"
#include "tcdistill/experiment.hpp"
#include "tcdistill/keyframe.hpp"
#include "tcdistill/metrics.hpp"
#include "tcdistill/parallel.hpp"
#include "tcdistill/serialize.hpp"
#include "tcdistill/ssim.hpp"
#include "tcdistill/synth.hpp"
#include "tcdistill/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

// Input or configuration problem detected before any output was written.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --config plus one --<section>.<field> flag per config leaf.
struct ConfigFlags {
    std::string file;
    std::map<std::string, std::string> values;

    void attach(CLI::App* cmd, const std::vector<std::string>& sections) {
        cmd->add_option("--config", file, "JSON run configuration")->check(CLI::ExistingFile);
        const json defaults = tcd::to_json(tcd::RunConfig{});
        for (const auto& section : sections) {
            for (const auto& [field, value] : defaults.at(section).items()) {
                const std::string key = section + "." + field;
                cmd->add_option("--" + key, values[key], "override " + key + " (default " + value.dump() + ")");
            }
        }
    }

    tcd::RunConfig load(CLI::App* cmd) const {
        std::vector<std::pair<std::string, std::string>> overrides;
        for (const auto& [key, value] : values) {
            if (cmd->count("--" + key) > 0) overrides.emplace_back(key, value);
        }
        std::optional<fs::path> path;
        if (!file.empty()) path = file;
        try {
            return tcd::load_run_config(path, overrides);
        } catch (const tcd::ConfigError& e) {
            throw UsageError(e.what());
        }
    }
};

tcd::VideoSequence load_input(const std::string& root) {
    try {
        return tcd::load_sequence(root);
    } catch (const tcd::DatasetError& e) {
        throw UsageError(e.what());
    }
}

void ensure_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
}

int cmd_synth(const tcd::SynthSpec& spec, const std::string& out) {
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const tcd::VideoSequence seq = tcd::generate_synthetic(spec);
    tcd::save_sequence(seq, out);
    std::cout << json(spec).dump(2) << '\n';
    return exit_ok;
}

int cmd_ssim(const std::string& a, const std::string& b, const tcd::RunConfig& cfg) {
    tcd::GrayImage x = [&] {
        try {
            return tcd::read_gray(a);
        } catch (const tcd::DatasetError& e) {
            throw UsageError(e.what());
        }
    }();
    tcd::GrayImage y = [&] {
        try {
            return tcd::read_gray(b);
        } catch (const tcd::DatasetError& e) {
            throw UsageError(e.what());
        }
    }();
    double v = 0.0;
    try {
        v = tcd::compute_ssim(x, y, cfg.ssim);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::printf("%.10f\n", v);
    return exit_ok;
}

int cmd_select(const std::string& root, std::optional<double> threshold, std::optional<std::size_t> uniform,
               const std::string& out, tcd::RunConfig cfg) {
    if (threshold) {
        cfg.selection.mode = "ssim";
        cfg.selection.threshold = *threshold;
    } else if (uniform) {
        cfg.selection.mode = "uniform";
        cfg.selection.uniform_count = *uniform;
    }
    try {
        cfg.validate();
    } catch (const tcd::ConfigError& e) {
        throw UsageError(e.what());
    }
    const tcd::VideoSequence seq = load_input(root);
    const tcd::SelectionResult sel = cfg.selection.mode == "ssim"
                                         ? tcd::select_keyframes(seq, cfg.selection.threshold, cfg.ssim)
                                         : tcd::select_uniform(seq.size(), cfg.selection.uniform_count);
    const json j = sel;
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        if (fs::path(out).has_parent_path()) ensure_output_dir(fs::path(out).parent_path());
        tcd::write_json_file(out, j);
        std::fprintf(stderr, "%zu key frames of %zu -> %s\n", sel.count(), seq.size(), out.c_str());
    }
    return exit_ok;
}

int cmd_train(const std::string& root, const std::string& selection_path, const std::string& out,
              const tcd::RunConfig& cfg) {
    const tcd::VideoSequence seq = load_input(root);
    tcd::SelectionResult sel = [&] {
        try {
            return tcd::selection_from_json(tcd::read_json_file(selection_path), seq.size());
        } catch (const std::exception& e) {
            throw UsageError(selection_path + ": " + e.what());
        }
    }();
    if (!seq.has_truth()) throw UsageError(root + ": no masks/ directory; key frames need manual labels");

    const tcd::TrainingResult tr =
        tcd::run_training(seq, sel, tcd::truth_labels(seq, sel.key_indices), cfg.teacher, cfg.train);

    const fs::path dir(out);
    ensure_output_dir(dir / "labels");
    tcd::write_json_file(dir / "student.json", tr.student);
    tcd::write_json_file(dir / "store.json", tcd::store_to_json(tr.store, tr.history));
    tcd::write_json_file(dir / "history.json", tr.history);
    for (const auto& [frame, entry] : tr.store.labels()) {
        tcd::write_mask_pgm(dir / "labels" / tcd::frame_file_name(frame, "pgm"), entry.mask);
    }
    std::fprintf(stderr, "%zu rounds (%s), %zu key frames (%zu manual)\n", tr.history.rounds.size(),
                 tr.history.stop_reason.c_str(), tr.store.keys().size(), sel.count());
    return exit_ok;
}

int cmd_eval(const std::string& root, const std::string& student_path, const std::string& out,
             const std::string& trace, const tcd::RunConfig& cfg) {
    const tcd::VideoSequence seq = load_input(root);
    if (!seq.has_truth()) throw UsageError(root + ": no masks/ directory to evaluate against");
    tcd::StudentParams theta = [&] {
        try {
            return tcd::read_json_file(student_path).get<tcd::StudentParams>();
        } catch (const std::exception& e) {
            throw UsageError(student_path + ": " + e.what());
        }
    }();
    if (theta.classes != seq.classes()) {
        throw UsageError(student_path + ": student has " + std::to_string(theta.classes) + " classes, sequence has " +
                         std::to_string(seq.classes()));
    }
    const tcd::EvalReport report = tcd::evaluate(seq, theta, cfg.eval);
    if (fs::path(out).has_parent_path()) ensure_output_dir(fs::path(out).parent_path());
    tcd::write_json_file(out, report);
    if (!trace.empty()) {
        std::ofstream csv(trace);
        if (!csv) throw std::runtime_error(trace + ": cannot open for writing");
        csv << "frame_index,tc_value\n";
        char line[64];
        for (std::size_t k = 0; k < report.tc_trace.size(); ++k) {
            std::snprintf(line, sizeof(line), "%zu,%.17g\n", k + 1, report.tc_trace[k]);
            csv << line;
        }
    }
    std::printf("mIoU %.4f  TC %.4f  (%zu frames)\n", report.miou, report.tc, report.frames_evaluated);
    return exit_ok;
}

int cmd_reproduce(const std::string& corpus, const std::string& out, const tcd::RunConfig& cfg) {
    tcd::ExperimentOptions options;
    options.config = cfg;
    if (!corpus.empty()) options.corpus_dir = corpus;
    const tcd::ExperimentResult result = tcd::run_experiment(options);
    tcd::write_experiment(result, out);
    std::cout << tcd::format_summary(options, result);
    return result.passed() ? exit_ok : exit_failure;
}

}  // namespace

int main(int argc, char** argv) {
    tcd::apply_thread_env();

    CLI::App app{"Key-frame selection and temporally consistent distillation for video segmentation"};
    app.require_subcommand(1);

    tcd::SynthSpec spec;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "generate a synthetic annotated sequence");
    synth->add_option("--out", synth_out, "output dataset directory")->required();
    synth->add_option("--width", spec.width)->capture_default_str();
    synth->add_option("--height", spec.height)->capture_default_str();
    synth->add_option("--frames", spec.num_frames)->capture_default_str();
    synth->add_option("--classes", spec.classes)->capture_default_str();
    synth->add_option("--blobs", spec.num_blobs)->capture_default_str();
    synth->add_option("--drift", spec.drift_px_per_frame, "pixels per frame")->capture_default_str();
    synth->add_option("--noise", spec.noise_std, "Gaussian noise std in intensity units")->capture_default_str();
    synth->add_option("--seed", spec.seed)->capture_default_str();

    std::string ssim_a, ssim_b;
    ConfigFlags ssim_flags;
    auto* ssim = app.add_subcommand("ssim", "SSIM between two PPM/PGM images");
    ssim->add_option("a", ssim_a)->required()->check(CLI::ExistingFile);
    ssim->add_option("b", ssim_b)->required()->check(CLI::ExistingFile);
    ssim_flags.attach(ssim, {"ssim"});

    std::string select_root, select_out;
    std::optional<double> select_threshold;
    std::optional<std::size_t> select_uniform;
    ConfigFlags select_flags;
    auto* select = app.add_subcommand("select", "choose key frames");
    select->add_option("--root", select_root, "dataset directory")->required();
    auto* thr_opt = select->add_option("--ssim-threshold", select_threshold, "SSIM threshold in (0, 1)");
    auto* uni_opt = select->add_option("--uniform", select_uniform, "number of uniformly spaced key frames");
    thr_opt->excludes(uni_opt);
    select->add_option("--out", select_out, "selection.json path (default: stdout)");
    select_flags.attach(select, {"ssim", "selection"});

    std::string train_root, train_selection, train_out;
    ConfigFlags train_flags;
    auto* train = app.add_subcommand("train", "train the student with temporal-consistency distillation");
    train->add_option("--root", train_root, "dataset directory")->required();
    train->add_option("--selection", train_selection, "selection.json")->required()->check(CLI::ExistingFile);
    train->add_option("--out", train_out, "output directory")->required();
    train_flags.attach(train, {"train", "teacher"});

    std::string eval_root, eval_student, eval_out, eval_trace;
    ConfigFlags eval_flags;
    auto* eval = app.add_subcommand("eval", "mIoU and temporal consistency of a trained student");
    eval->add_option("--root", eval_root, "dataset directory")->required();
    eval->add_option("--student", eval_student, "student.json")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", eval_out, "report.json path")->required();
    eval->add_option("--trace", eval_trace, "per-frame TC as CSV (frame_index,tc_value)");
    eval_flags.attach(eval, {"eval"});

    std::string repro_corpus, repro_out;
    ConfigFlags repro_flags;
    auto* repro = app.add_subcommand("reproduce", "run all scenarios on the standard synthetic corpus");
    repro->add_option("--corpus", repro_corpus, "also write the generated sequences here");
    repro->add_option("--out", repro_out, "directory for report.json and history.json")->required();
    repro_flags.attach(repro, {"ssim", "train", "teacher", "eval"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*synth) return cmd_synth(spec, synth_out);
        if (*ssim) return cmd_ssim(ssim_a, ssim_b, ssim_flags.load(ssim));
        if (*select) {
            if (!select_threshold && !select_uniform && select->count("--selection.mode") == 0) {
                throw UsageError("select: give --ssim-threshold or --uniform");
            }
            return cmd_select(select_root, select_threshold, select_uniform, select_out, select_flags.load(select));
        }
        if (*train) return cmd_train(train_root, train_selection, train_out, train_flags.load(train));
        if (*eval) return cmd_eval(eval_root, eval_student, eval_out, eval_trace, eval_flags.load(eval));
        if (*repro) return cmd_reproduce(repro_corpus, repro_out, repro_flags.load(repro));
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_failure;
    }
    return exit_usage;
}
