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

#include "tcdistill/image.hpp"

namespace tcd {

/// Temporal-consistency loss: mean over pixels of ||teacher(i) - student(i)||^2.
double tc_loss(const SoftMask& teacher, const SoftMask& student);

/// Key-frame loss: mean over pixels of ||pred(i) - onehot(label(i))||^2. In [0, 2].
double kf_loss(const SoftMask& pred, const ClassMask& label);

/// alpha * kf + (1 - alpha) * tc, alpha in [0, 1].
double total_loss(double kf, double tc, double alpha);

}  // namespace tcd
