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

// Straightforward single-threaded versions of the parallel kernels. They are
// not used by the pipeline; tests compare against them and the benchmark
// measures the speedup.

#include "tcdistill/features.hpp"
#include "tcdistill/image.hpp"
#include "tcdistill/ssim.hpp"
#include "tcdistill/student.hpp"
#include "tcdistill/teacher.hpp"

namespace tcd::reference {

/// Direct 2-D window sums per output position.
double compute_ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p = {});

PixelFeatures extract_features(const ColorImage& img);

SoftMask student_forward(const PixelFeatures& phi, const StudentParams& theta);

StudentGradient student_backward(const PixelFeatures& phi, const StudentParams& theta, const SoftMask& target,
                                 double weight);

/// Pixel-major readout: recomputes the attention of a pixel's patch for every pixel.
SoftMask propagate(const ColorImage& query, const TeacherMemory& memory);

}  // namespace tcd::reference
