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

// Teacher-to-student distillation with key-frame updating.
//
// One round:
//   1. For every temporal frame t, the frozen teacher reads out a mask from a
//      memory holding every current key frame with index < t.
//   2. epochs_per_round full-batch descent steps on
//        J = alpha * mean_k kf_loss(student(x_k), y_k)
//          + (1 - alpha) * mean_t tc_loss(teacher_t, student(x_t)).
//      A step that would raise J is retried with half the step size.
//   3. Each temporal frame (ascending) whose hardened teacher and student
//      masks agree with mIoU > tc_threshold is promoted into the key set with
//      the student's mask as a pseudo label.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tcdistill/features.hpp"
#include "tcdistill/image.hpp"
#include "tcdistill/keyframe.hpp"
#include "tcdistill/store.hpp"
#include "tcdistill/student.hpp"
#include "tcdistill/teacher.hpp"

namespace tcd {

struct TrainConfig {
    double alpha = 0.5;
    double tc_threshold = 0.9;
    double learning_rate = 0.5;
    std::size_t epochs_per_round = 50;
    std::size_t max_rounds = 10;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

struct TemporalFrameRecord {
    std::size_t frame = 0;
    std::vector<std::size_t> memory;  ///< key frames the teacher read from
    double gate_miou = 0.0;           ///< mIoU(hard teacher, hard student) after the round
    double tc_loss = 0.0;             ///< tc_loss(teacher, student) after the round
    bool promoted = false;

    bool operator==(const TemporalFrameRecord&) const = default;
};

struct RoundRecord {
    std::size_t round = 0;
    std::size_t key_count = 0;       ///< |K| during the round
    std::size_t temporal_count = 0;  ///< |T| during the round
    double initial_loss = 0.0;
    std::vector<double> epoch_losses;
    double j_kf = 0.0;
    double j_tc = 0.0;
    double j_total = 0.0;
    double final_step = 0.0;
    std::vector<TemporalFrameRecord> temporal;
    std::vector<std::size_t> promotions;

    bool operator==(const RoundRecord&) const = default;
};

struct TrainingHistory {
    std::vector<RoundRecord> rounds;
    std::string stop_reason;

    bool operator==(const TrainingHistory&) const = default;
};

/// Features of every frame of a sequence, computed once.
std::vector<PixelFeatures> extract_all_features(const VideoSequence& seq);

struct RoundResult {
    StudentParams student;
    RoundRecord record;
    /// student predictions on the round's temporal frames, after the update
    std::map<std::size_t, SoftMask> temporal_predictions;
};

/// One round; applies promotions to `store`.
RoundResult train_round(const VideoSequence& seq, std::span<const PixelFeatures> features, KeyFrameStore& store,
                        const StudentParams& theta, const TeacherConfig& teacher, const TrainConfig& cfg,
                        std::size_t round_index);

struct TrainingResult {
    StudentParams student;
    KeyFrameStore store;
    TrainingHistory history;
    std::map<std::size_t, SoftMask> temporal_predictions;
};

/// Runs rounds until max_rounds, or until a round promotes nothing and its
/// relative loss improvement is below 1e-4. `labels` must cover exactly the
/// selection's key indices.
TrainingResult run_training(const VideoSequence& seq, const SelectionResult& selection,
                            std::map<std::size_t, ClassMask> labels, const TeacherConfig& teacher,
                            const TrainConfig& cfg);

struct SupervisedResult {
    StudentParams student;
    std::vector<double> epoch_losses;
};

/// Key-frame-only baseline: epochs_per_round * max_rounds descent steps on the
/// mean key-frame loss, step size reset every epochs_per_round steps. alpha
/// and tc_threshold are ignored.
SupervisedResult fit_supervised(const VideoSequence& seq, const std::map<std::size_t, ClassMask>& labels,
                                const TrainConfig& cfg);

/// Ground-truth labels of the given frames.
std::map<std::size_t, ClassMask> truth_labels(const VideoSequence& seq, std::span<const std::size_t> frames);

}  // namespace tcd
