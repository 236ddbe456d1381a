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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcdistill/image.hpp"
#include "tcdistill/student.hpp"
#include "tcdistill/teacher.hpp"

namespace tcd {

/// Per-class IoU; nullopt marks classes absent from both masks, which are
/// left out of the mean.
struct IouResult {
    std::vector<std::optional<double>> per_class;
    double mean = 0.0;
};

/// Accumulates intersection and union pixel counts per class across frames
/// (micro averaging).
class IouAccumulator {
public:
    explicit IouAccumulator(std::size_t classes);
    void add(const ClassMask& pred, const ClassMask& truth);
    IouResult result() const;

private:
    std::vector<std::uint64_t> intersection_;
    std::vector<std::uint64_t> union_;
};

IouResult miou(const ClassMask& pred, const ClassMask& truth);

struct TcResult {
    double tc = 0.0;
    /// trace[k] belongs to frame k+1: mIoU between the previous prediction
    /// propagated onto frame k+1 and the prediction for frame k+1.
    std::vector<double> trace;
};

/// Propagation-based temporal consistency of a prediction sequence.
TcResult temporal_consistency(std::span<const ClassMask> preds, const VideoSequence& frames,
                              const TeacherConfig& propagator);

struct EvalConfig {
    /// Propagator used by the TC metric, kept apart from the training teacher.
    /// At this temperature an identical frame reproduces its own mask exactly.
    TeacherConfig propagator{4, 1e-3};

    bool operator==(const EvalConfig&) const = default;
};

struct EvalReport {
    std::vector<std::optional<double>> per_class_iou;
    double miou = 0.0;
    double tc = 0.0;
    std::vector<double> tc_trace;
    std::size_t frames_evaluated = 0;
    EvalConfig config;

    bool operator==(const EvalReport&) const = default;
};

/// Runs the student on every frame; mIoU is micro-averaged against ground truth.
EvalReport evaluate(const VideoSequence& seq, const StudentParams& theta, const EvalConfig& cfg = {});

/// Same report for an externally produced prediction sequence.
EvalReport evaluate_predictions(const VideoSequence& seq, std::span<const ClassMask> preds,
                                const EvalConfig& cfg = {});

}  // namespace tcd
