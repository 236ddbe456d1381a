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

#include "tcdistill/losses.hpp"

#include <stdexcept>

#include "tcdistill/parallel.hpp"

namespace tcd {

double tc_loss(const SoftMask& teacher, const SoftMask& student) {
    if (teacher.width() != student.width() || teacher.height() != student.height() ||
        teacher.classes() != student.classes()) {
        throw std::invalid_argument("tc_loss: shape mismatch");
    }
    CompensatedSum s;
    const auto a = teacher.data();
    const auto b = student.data();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s.add(d * d);
    }
    return s.value() / static_cast<double>(teacher.pixels());
}

double kf_loss(const SoftMask& pred, const ClassMask& label) {
    if (pred.width() != label.width() || pred.height() != label.height() || pred.classes() != label.classes()) {
        throw std::invalid_argument("kf_loss: shape mismatch");
    }
    CompensatedSum s;
    const auto labels = label.data();
    for (std::size_t i = 0; i < pred.pixels(); ++i) {
        const auto p = pred.pixel(i);
        for (std::size_t c = 0; c < p.size(); ++c) {
            const double d = p[c] - (c == labels[i] ? 1.0 : 0.0);
            s.add(d * d);
        }
    }
    return s.value() / static_cast<double>(pred.pixels());
}

double total_loss(double kf, double tc, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("total_loss: alpha must lie in [0, 1]");
    return alpha * kf + (1.0 - alpha) * tc;
}

}  // namespace tcd
