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

#include "tcdistill/trainer.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "tcdistill/losses.hpp"
#include "tcdistill/masks.hpp"
#include "tcdistill/metrics.hpp"

namespace tcd {

namespace {

// Step sizes below this fraction of the configured rate end the descent.
constexpr double min_step_fraction = 1e-12;
constexpr double convergence_tolerance = 1e-4;

struct Term {
    const PixelFeatures* phi;
    SoftMask target;
    double weight;
};

struct Evaluation {
    double loss = 0.0;
    StudentGradient grad;
};

Evaluation evaluate_terms(const std::vector<Term>& terms, const StudentParams& theta) {
    Evaluation ev;
    ev.grad.weights.assign(theta.weights.size(), 0.0);
    ev.grad.bias.assign(theta.bias.size(), 0.0);
    for (const auto& term : terms) {
        const StudentGradient g = student_backward(*term.phi, theta, term.target, term.weight);
        for (std::size_t k = 0; k < g.weights.size(); ++k) ev.grad.weights[k] += g.weights[k];
        for (std::size_t k = 0; k < g.bias.size(); ++k) ev.grad.bias[k] += g.bias[k];
        ev.loss += g.loss;
    }
    ev.grad.loss = ev.loss;
    return ev;
}

struct Descent {
    StudentParams theta;
    double initial_loss = 0.0;
    std::vector<double> losses;
    double final_step = 0.0;
};

Descent descend(const std::vector<Term>& terms, StudentParams theta, double step, std::size_t epochs) {
    Descent d;
    Evaluation current = evaluate_terms(terms, theta);
    d.initial_loss = current.loss;
    const double min_step = step * min_step_fraction;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        bool accepted = false;
        while (step >= min_step) {
            StudentParams candidate = apply_step(theta, current.grad, step);
            Evaluation next = evaluate_terms(terms, candidate);
            if (next.loss <= current.loss) {
                theta = std::move(candidate);
                current = std::move(next);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stationary to working precision
        d.losses.push_back(current.loss);
    }
    d.theta = std::move(theta);
    d.final_step = step;
    return d;
}

void check_labels_match(const SelectionResult& selection, const std::map<std::size_t, ClassMask>& labels) {
    if (labels.size() != selection.key_indices.size()) {
        throw std::invalid_argument("run_training: " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(selection.key_indices.size()) + " key frames");
    }
    for (std::size_t k : selection.key_indices) {
        if (!labels.contains(k)) throw std::invalid_argument("run_training: missing label for key frame " +
                                                             std::to_string(k));
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("train: alpha must lie in [0, 1]");
    if (!(tc_threshold > 0.0 && tc_threshold < 1.0)) {
        throw std::invalid_argument("train: tc_threshold must lie in (0, 1)");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("train: learning_rate must be > 0");
    }
}

std::vector<PixelFeatures> extract_all_features(const VideoSequence& seq) {
    std::vector<PixelFeatures> out;
    out.reserve(seq.size());
    for (const auto& f : seq.frames()) out.push_back(extract_features(f));
    return out;
}

std::map<std::size_t, ClassMask> truth_labels(const VideoSequence& seq, std::span<const std::size_t> frames) {
    if (!seq.has_truth()) throw std::invalid_argument("truth_labels: sequence has no ground truth");
    std::map<std::size_t, ClassMask> out;
    for (std::size_t k : frames) out.emplace(k, seq.truth(k));
    return out;
}

RoundResult train_round(const VideoSequence& seq, std::span<const PixelFeatures> features, KeyFrameStore& store,
                        const StudentParams& theta, const TeacherConfig& teacher, const TrainConfig& cfg,
                        std::size_t round_index) {
    cfg.validate();
    teacher.validate();
    if (store.keys().empty()) throw std::invalid_argument("train_round: empty key set");
    if (features.size() != seq.size() || store.num_frames() != seq.size()) {
        throw std::invalid_argument("train_round: store/features do not match the sequence");
    }
    if (auto bad = store.invariant_violation()) throw std::logic_error("train_round: store invariant: " + *bad);

    const std::vector<std::size_t> keys(store.keys().begin(), store.keys().end());
    const std::vector<std::size_t> temporal(store.temporal().begin(), store.temporal().end());
    const std::size_t classes = seq.classes();

    // Teacher readouts, frozen for the round. keys is ascending, so the
    // memory for t is a prefix of it.
    std::vector<std::shared_ptr<const MemoryEntry>> encoded;
    encoded.reserve(keys.size());
    for (std::size_t k : keys) {
        encoded.push_back(TeacherMemory::encode(k, seq.frame(k), store.label(k).mask, teacher));
    }
    RoundRecord record;
    record.round = round_index;
    record.key_count = keys.size();
    record.temporal_count = temporal.size();
    std::vector<SoftMask> teacher_out;
    teacher_out.reserve(temporal.size());
    for (std::size_t t : temporal) {
        TeacherMemory memory(teacher, classes);
        for (const auto& e : encoded) {
            if (e->frame_index < t) memory.add(e);
        }
        TemporalFrameRecord tr;
        tr.frame = t;
        tr.memory = memory.frame_indices();
        record.temporal.push_back(std::move(tr));
        teacher_out.push_back(propagate(seq.frame(t), memory));
    }

    std::vector<Term> terms;
    if (cfg.alpha > 0.0) {
        const double w = cfg.alpha / static_cast<double>(keys.size());
        for (std::size_t k : keys) terms.push_back({&features[k], mask_to_onehot(store.label(k).mask), w});
    }
    if (cfg.alpha < 1.0 && !temporal.empty()) {
        const double w = (1.0 - cfg.alpha) / static_cast<double>(temporal.size());
        for (std::size_t i = 0; i < temporal.size(); ++i) {
            terms.push_back({&features[temporal[i]], teacher_out[i], w});
        }
    }

    Descent d = descend(terms, theta, cfg.learning_rate, cfg.epochs_per_round);
    record.initial_loss = d.initial_loss;
    record.epoch_losses = std::move(d.losses);
    record.final_step = d.final_step;

    double kf_sum = 0.0;
    for (std::size_t k : keys) kf_sum += kf_loss(student_forward(features[k], d.theta), store.label(k).mask);
    record.j_kf = kf_sum / static_cast<double>(keys.size());

    RoundResult result;
    double tc_sum = 0.0;
    for (std::size_t i = 0; i < temporal.size(); ++i) {
        SoftMask pred = student_forward(features[temporal[i]], d.theta);
        auto& tr = record.temporal[i];
        tr.tc_loss = tc_loss(teacher_out[i], pred);
        tr.gate_miou = miou(soft_to_hard(teacher_out[i]), soft_to_hard(pred)).mean;
        tc_sum += tr.tc_loss;
        result.temporal_predictions.emplace(temporal[i], std::move(pred));
    }
    record.j_tc = temporal.empty() ? 0.0 : tc_sum / static_cast<double>(temporal.size());
    record.j_total = total_loss(record.j_kf, record.j_tc, cfg.alpha);

    for (auto& tr : record.temporal) {
        if (tr.gate_miou > cfg.tc_threshold) {
            store.promote(tr.frame, soft_to_hard(result.temporal_predictions.at(tr.frame)));
            tr.promoted = true;
            record.promotions.push_back(tr.frame);
        }
    }

    result.student = std::move(d.theta);
    result.record = std::move(record);
    return result;
}

TrainingResult run_training(const VideoSequence& seq, const SelectionResult& selection,
                            std::map<std::size_t, ClassMask> labels, const TeacherConfig& teacher,
                            const TrainConfig& cfg) {
    cfg.validate();
    teacher.validate();
    if (seq.empty()) throw std::invalid_argument("run_training: empty sequence");
    if (selection.num_frames() != seq.size()) {
        throw std::invalid_argument("run_training: selection does not match the sequence length");
    }
    check_labels_match(selection, labels);

    TrainingResult out{StudentParams::random(seq.classes(), cfg.seed), KeyFrameStore(seq.size(), std::move(labels)),
                       {}, {}};
    out.store.build_temporal_set();
    out.history.stop_reason = "max_rounds";
    if (cfg.max_rounds == 0) return out;

    const auto features = extract_all_features(seq);
    for (std::size_t r = 0; r < cfg.max_rounds; ++r) {
        RoundResult rr = train_round(seq, features, out.store, out.student, teacher, cfg, r);
        out.student = std::move(rr.student);
        out.temporal_predictions = std::move(rr.temporal_predictions);
        const RoundRecord& rec = out.history.rounds.emplace_back(std::move(rr.record));

        const double end = rec.epoch_losses.empty() ? rec.initial_loss : rec.epoch_losses.back();
        const double rel = rec.initial_loss > 0.0 ? (rec.initial_loss - end) / rec.initial_loss : 0.0;
        if (rec.promotions.empty() && rel < convergence_tolerance) {
            out.history.stop_reason = "converged";
            break;
        }
    }
    return out;
}

SupervisedResult fit_supervised(const VideoSequence& seq, const std::map<std::size_t, ClassMask>& labels,
                                const TrainConfig& cfg) {
    cfg.validate();
    if (labels.empty()) throw std::invalid_argument("fit_supervised: no labelled frames");
    std::vector<PixelFeatures> features;
    std::vector<Term> terms;
    features.reserve(labels.size());
    const double w = 1.0 / static_cast<double>(labels.size());
    for (const auto& [k, mask] : labels) features.push_back(extract_features(seq.frame(k)));
    std::size_t i = 0;
    for (const auto& [k, mask] : labels) terms.push_back({&features[i++], mask_to_onehot(mask), w});

    SupervisedResult out{StudentParams::random(seq.classes(), cfg.seed), {}};
    for (std::size_t r = 0; r < cfg.max_rounds; ++r) {
        Descent d = descend(terms, out.student, cfg.learning_rate, cfg.epochs_per_round);
        out.student = std::move(d.theta);
        out.epoch_losses.insert(out.epoch_losses.end(), d.losses.begin(), d.losses.end());
    }
    return out;
}

}  // namespace tcd
