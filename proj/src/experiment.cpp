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

#include "tcdistill/experiment.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "tcdistill/audit.hpp"
#include "tcdistill/dataset_io.hpp"
#include "tcdistill/keyframe.hpp"
#include "tcdistill/metrics.hpp"
#include "tcdistill/serialize.hpp"
#include "tcdistill/trainer.hpp"

namespace tcd {

using nlohmann::json;

std::vector<SynthSpec> standard_corpus() {
    std::vector<SynthSpec> out;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthSpec s;
        s.width = 64;
        s.height = 64;
        s.num_frames = 40;
        s.classes = 3;
        s.num_blobs = 8;
        s.drift_px_per_frame = 1.0;
        s.noise_std = 4.0;
        s.seed = seed;
        out.push_back(s);
    }
    return out;
}

bool ExperimentResult::passed() const noexcept {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return !checks.empty();
}

namespace {

struct Outcome {
    std::size_t annotations = 0;
    EvalReport eval;
};

json outcome_json(const Outcome& o) {
    return json{{"annotations", o.annotations}, {"miou", o.eval.miou}, {"tc", o.eval.tc}};
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

std::string sequence_name(const SynthSpec& s) { return "seq_" + std::to_string(s.seed); }

}  // namespace

ExperimentResult run_experiment(const ExperimentOptions& options) {
    options.config.validate();
    if (options.corpus.empty()) throw std::invalid_argument("experiment: empty corpus");
    if (options.scenario_thresholds.empty()) throw std::invalid_argument("experiment: no scenario thresholds");
    for (const auto& s : options.corpus) s.validate();
    for (double t : options.count_thresholds) {
        if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("experiment: thresholds must lie in (0, 1)");
    }
    for (double t : options.scenario_thresholds) {
        if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("experiment: thresholds must lie in (0, 1)");
    }

    const RunConfig& cfg = options.config;
    const std::size_t nseq = options.corpus.size();
    const std::size_t nthr = options.scenario_thresholds.size();

    ExperimentResult result;
    json sequences = json::array();
    json histories = json::array();
    std::vector<std::string> audit_failures;
    std::size_t runs_audited = 0;

    // [scenario][threshold] sums over the corpus; scenario 0 is "full"
    const std::vector<std::string> names{"full", "keyframe", "uniform", "ssim"};
    std::vector<std::vector<Outcome>> sums(names.size(), std::vector<Outcome>(nthr));

    for (const auto& spec : options.corpus) {
        const std::string name = sequence_name(spec);
        const VideoSequence seq = generate_synthetic(spec);
        if (options.corpus_dir) save_sequence(seq, *options.corpus_dir / name);

        std::vector<std::size_t> counts;
        for (double t : options.count_thresholds) counts.push_back(select_keyframes(seq, t, cfg.ssim).count());
        result.key_counts.push_back(counts);

        json seq_json{{"name", name}, {"spec", spec}, {"key_counts", counts}};

        std::vector<std::size_t> all(seq.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const SupervisedResult full = fit_supervised(seq, truth_labels(seq, all), cfg.train);
        const Outcome full_out{seq.size(), evaluate(seq, full.student, cfg.eval)};
        seq_json["full"] = outcome_json(full_out);
        sums[0][0].annotations += static_cast<double>(full_out.annotations);
        sums[0][0].eval.miou += full_out.eval.miou;
        sums[0][0].eval.tc += full_out.eval.tc;

        json runs = json::array();
        for (std::size_t ti = 0; ti < nthr; ++ti) {
            const double thr = options.scenario_thresholds[ti];
            const SelectionResult ssim_sel = select_keyframes(seq, thr, cfg.ssim);
            const SelectionResult uni_sel = select_uniform(seq.size(), ssim_sel.count());

            const SupervisedResult kf = fit_supervised(seq, truth_labels(seq, ssim_sel.key_indices), cfg.train);
            const Outcome kf_out{ssim_sel.count(), evaluate(seq, kf.student, cfg.eval)};

            json run{{"threshold", thr}, {"keyframe", outcome_json(kf_out)}};
            std::vector<Outcome> outs{kf_out};
            for (const auto& [label, sel] :
                 {std::pair<const char*, const SelectionResult*>{"uniform", &uni_sel}, {"ssim", &ssim_sel}}) {
                const TrainingResult tr =
                    run_training(seq, *sel, truth_labels(seq, sel->key_indices), cfg.teacher, cfg.train);
                const json store = store_to_json(tr.store, tr.history);
                const json hist = tr.history;
                const AuditReport audit = audit_training(store, hist, seq, *sel, cfg.train.tc_threshold);
                ++runs_audited;
                for (const auto& v : audit.violations) {
                    audit_failures.push_back(name + "/" + label + "@" + fmt("%.2f", thr) + ": " + v);
                }
                Outcome o{sel->count(), evaluate(seq, tr.student, cfg.eval)};
                json entry = outcome_json(o);
                entry["key_indices"] = sel->key_indices;
                entry["final_key_count"] = tr.store.keys().size();
                entry["rounds"] = tr.history.rounds.size();
                entry["stop_reason"] = tr.history.stop_reason;
                run[label] = entry;
                outs.push_back(std::move(o));
                histories.push_back(
                    {{"sequence", name}, {"scenario", label}, {"threshold", thr}, {"store", store}, {"history", hist}});
            }
            for (std::size_t s = 0; s < outs.size(); ++s) {
                sums[s + 1][ti].annotations += static_cast<double>(outs[s].annotations);
                sums[s + 1][ti].eval.miou += outs[s].eval.miou;
                sums[s + 1][ti].eval.tc += outs[s].eval.tc;
            }
            runs.push_back(std::move(run));
        }
        seq_json["runs"] = std::move(runs);
        sequences.push_back(std::move(seq_json));
    }

    const double inv = 1.0 / static_cast<double>(nseq);
    auto mean_row = [&](std::size_t s, std::size_t ti, std::optional<double> thr) {
        return ScenarioRow{names[s], thr, sums[s][ti].annotations * inv, sums[s][ti].eval.miou * inv,
                           sums[s][ti].eval.tc * inv};
    };
    result.rows.push_back(mean_row(0, 0, std::nullopt));
    for (std::size_t s = 1; s < names.size(); ++s) {
        for (std::size_t ti = 0; ti < nthr; ++ti) result.rows.push_back(mean_row(s, ti, options.scenario_thresholds[ti]));
    }

    // key-frame count non-decreasing in the threshold
    {
        CheckResult c{"keyframe_count_monotone", true, ""};
        for (std::size_t s = 0; s < nseq; ++s) {
            for (std::size_t i = 1; i < result.key_counts[s].size(); ++i) {
                if (result.key_counts[s][i] < result.key_counts[s][i - 1]) {
                    c.passed = false;
                    c.detail += sequence_name(options.corpus[s]) + " drops at " +
                                fmt("%.2f", options.count_thresholds[i]) + "; ";
                }
            }
        }
        if (c.passed) c.detail = std::to_string(nseq) + " sequences";
        result.checks.push_back(std::move(c));
    }
    // training invariants on every TC run
    {
        CheckResult c{"training_invariants", audit_failures.empty(), ""};
        if (c.passed) {
            c.detail = std::to_string(runs_audited) + " runs audited";
        } else {
            c.detail = std::to_string(audit_failures.size()) + " violations, first: " + audit_failures.front();
        }
        result.checks.push_back(std::move(c));
    }
    // ssim+TC vs keyframe-only at matched thresholds
    {
        CheckResult c{"tc_training_direction", true, ""};
        for (std::size_t ti = 0; ti < nthr; ++ti) {
            const ScenarioRow& kf = result.rows[1 + ti];
            const ScenarioRow& ss = result.rows[1 + 2 * nthr + ti];
            const bool tc_ok = ss.tc >= kf.tc + options.tc_margin;
            const bool miou_ok = ss.miou >= kf.miou - options.miou_margin;
            if (!tc_ok || !miou_ok) c.passed = false;
            c.detail += fmt("%.2f", options.scenario_thresholds[ti]) + ": dTC " + fmt("%+.4f", ss.tc - kf.tc) +
                        " dmIoU " + fmt("%+.4f", ss.miou - kf.miou) + (tc_ok && miou_ok ? "" : " FAIL") + "; ";
        }
        result.checks.push_back(std::move(c));
    }

    json rows = json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"scenario", r.scenario},
                        {"threshold", r.threshold ? json(*r.threshold) : json(nullptr)},
                        {"annotations", r.annotations},
                        {"miou", r.miou},
                        {"tc", r.tc}});
    }
    json checks = json::array();
    for (const auto& c : result.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});

    result.report = json{{"config", to_json(cfg)},
                         {"count_thresholds", options.count_thresholds},
                         {"scenario_thresholds", options.scenario_thresholds},
                         {"margins", {{"tc", options.tc_margin}, {"miou", options.miou_margin}}},
                         {"key_counts", result.key_counts},
                         {"scenarios", rows},
                         {"sequences", sequences},
                         {"checks", checks},
                         {"passed", result.passed()}};
    result.history = json{{"runs", histories}};
    return result;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_json_file(out_dir / "report.json", result.report);
    write_json_file(out_dir / "history.json", result.history);
}

std::string format_summary(const ExperimentOptions& options, const ExperimentResult& result) {
    std::ostringstream os;
    os << "key frames per threshold\n";
    os << "  sequence ";
    for (double t : options.count_thresholds) os << fmt("%7.2f", t);
    os << '\n';
    for (std::size_t s = 0; s < result.key_counts.size(); ++s) {
        char name[16];
        std::snprintf(name, sizeof(name), "  %-9s", sequence_name(options.corpus[s]).c_str());
        os << name;
        for (std::size_t c : result.key_counts[s]) os << fmt("%7.0f", static_cast<double>(c));
        os << '\n';
    }
    os << "\nscenario   threshold  annotations    mIoU      TC\n";
    for (const auto& r : result.rows) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-10s %9s %12.1f %7.4f %7.4f\n", r.scenario.c_str(),
                      r.threshold ? fmt("%.2f", *r.threshold).c_str() : "-", r.annotations, r.miou, r.tc);
        os << line;
    }
    os << '\n';
    for (const auto& c : result.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    return os.str();
}

}  // namespace tcd
