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

#include "tcdistill/masks.hpp"

#include <stdexcept>

namespace tcd {

SoftMask mask_to_onehot(const ClassMask& m) {
    const std::size_t nc = m.classes();
    std::vector<double> data(m.pixels() * nc, 0.0);
    const auto labels = m.data();
    for (std::size_t i = 0; i < m.pixels(); ++i) data[i * nc + labels[i]] = 1.0;
    return SoftMask(m.width(), m.height(), nc, std::move(data));
}

ClassMask soft_to_hard(const SoftMask& s) {
    if (s.classes() > ClassMask::max_classes) throw std::invalid_argument("soft_to_hard: too many classes");
    std::vector<std::uint8_t> labels(s.pixels());
    for (std::size_t i = 0; i < s.pixels(); ++i) {
        const auto p = s.pixel(i);
        std::size_t best = 0;
        for (std::size_t c = 1; c < p.size(); ++c) {
            if (p[c] > p[best]) best = c;
        }
        labels[i] = static_cast<std::uint8_t>(best);
    }
    return ClassMask(s.width(), s.height(), s.classes(), std::move(labels));
}

}  // namespace tcd
