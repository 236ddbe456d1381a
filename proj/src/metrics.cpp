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

#include "tcdistill/metrics.hpp"

#include <stdexcept>

#include "tcdistill/features.hpp"
#include "tcdistill/masks.hpp"
#include "tcdistill/parallel.hpp"

namespace tcd {

IouAccumulator::IouAccumulator(std::size_t classes) : intersection_(classes, 0), union_(classes, 0) {}

void IouAccumulator::add(const ClassMask& pred, const ClassMask& truth) {
    if (pred.width() != truth.width() || pred.height() != truth.height()) {
        throw std::invalid_argument("miou: shape mismatch");
    }
    if (pred.classes() != union_.size() || truth.classes() != union_.size()) {
        throw std::invalid_argument("miou: class count mismatch");
    }
    const auto p = pred.data();
    const auto t = truth.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == t[i]) {
            ++intersection_[p[i]];
            ++union_[p[i]];
        } else {
            ++union_[p[i]];
            ++union_[t[i]];
        }
    }
}

IouResult IouAccumulator::result() const {
    IouResult r;
    r.per_class.resize(union_.size());
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < union_.size(); ++c) {
        if (union_[c] == 0) continue;
        const double iou = static_cast<double>(intersection_[c]) / static_cast<double>(union_[c]);
        r.per_class[c] = iou;
        sum += iou;
        ++present;
    }
    r.mean = present > 0 ? sum / static_cast<double>(present) : 0.0;
    return r;
}

IouResult miou(const ClassMask& pred, const ClassMask& truth) {
    IouAccumulator acc(pred.classes());
    acc.add(pred, truth);
    return acc.result();
}

TcResult temporal_consistency(std::span<const ClassMask> preds, const VideoSequence& frames,
                              const TeacherConfig& propagator) {
    if (preds.size() != frames.size()) {
        throw std::invalid_argument("temporal_consistency: " + std::to_string(preds.size()) +
                                    " predictions for " + std::to_string(frames.size()) + " frames");
    }
    if (preds.size() < 2) throw std::invalid_argument("temporal_consistency: need at least two frames");
    propagator.validate();

    TcResult r;
    r.trace.resize(preds.size() - 1);
    // frames are independent; each propagate call is itself parallel
    for (std::size_t t = 1; t < preds.size(); ++t) {
        TeacherMemory memory(propagator, preds[t - 1].classes());
        memory.add(TeacherMemory::encode(t - 1, frames.frame(t - 1), preds[t - 1], propagator));
        const ClassMask carried = soft_to_hard(propagate(frames.frame(t), memory));
        r.trace[t - 1] = miou(carried, preds[t]).mean;
    }
    r.tc = ordered_sum(r.trace) / static_cast<double>(r.trace.size());
    return r;
}

EvalReport evaluate_predictions(const VideoSequence& seq, std::span<const ClassMask> preds, const EvalConfig& cfg) {
    if (!seq.has_truth()) throw std::invalid_argument("evaluate: sequence has no ground truth");
    if (preds.size() != seq.size()) throw std::invalid_argument("evaluate: prediction count differs from frames");

    IouAccumulator acc(seq.classes());
    for (std::size_t t = 0; t < seq.size(); ++t) acc.add(preds[t], seq.truth(t));
    const IouResult iou = acc.result();

    EvalReport report;
    report.per_class_iou = iou.per_class;
    report.miou = iou.mean;
    report.frames_evaluated = seq.size();
    report.config = cfg;
    if (seq.size() >= 2) {
        TcResult tc = temporal_consistency(preds, seq, cfg.propagator);
        report.tc = tc.tc;
        report.tc_trace = std::move(tc.trace);
    } else {
        report.tc = 1.0;
    }
    return report;
}

EvalReport evaluate(const VideoSequence& seq, const StudentParams& theta, const EvalConfig& cfg) {
    if (!seq.has_truth()) throw std::invalid_argument("evaluate: sequence has no ground truth");
    std::vector<ClassMask> preds;
    preds.reserve(seq.size());
    for (const auto& frame : seq.frames()) preds.push_back(soft_to_hard(student_forward(frame, theta)));
    return evaluate_predictions(seq, preds, cfg);
}

}  // namespace tcd
