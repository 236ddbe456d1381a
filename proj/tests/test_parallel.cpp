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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tcdistill/features.hpp"
#include "tcdistill/metrics.hpp"
#include "tcdistill/parallel.hpp"
#include "tcdistill/reference.hpp"
#include "tcdistill/ssim.hpp"
#include "tcdistill/student.hpp"
#include "tcdistill/synth.hpp"
#include "tcdistill/teacher.hpp"

using namespace tcd;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Restores the worker cap when a test changes it.
struct WorkerCap {
    explicit WorkerCap(int n) { set_worker_count(n); }
    ~WorkerCap() { set_worker_count(0); }
};

}  // namespace

TEST_SUITE("parallel") {

TEST_CASE("ssim agrees with the serial reference") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) {
        const GrayImage a = oracle::random_gray(rng, 40 + i, 33);
        const GrayImage b = oracle::random_gray(rng, 40 + i, 33);
        CHECK(std::abs(compute_ssim(a, b) - reference::compute_ssim(a, b)) <= 1e-12);
    }
}

TEST_CASE("features, forward and backward agree with the serial reference") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 5; ++i) {
        const ColorImage img = oracle::random_color(rng, 17, 13);
        const PixelFeatures phi = extract_features(img);
        CHECK(max_abs_diff(phi.values, reference::extract_features(img).values) <= 1e-15);
        const StudentParams theta = oracle::random_student(rng, 3, feature_count, 2.0);
        CHECK(max_abs_diff(student_forward(phi, theta).data(), reference::student_forward(phi, theta).data()) <=
              1e-15);
        const SoftMask target = oracle::random_soft(rng, 17, 13, 3);
        const StudentGradient g = student_backward(phi, theta, target, 0.8);
        const StudentGradient r = reference::student_backward(phi, theta, target, 0.8);
        CHECK(max_abs_diff(g.weights, r.weights) <= 1e-12);
        CHECK(max_abs_diff(g.bias, r.bias) <= 1e-12);
        CHECK(std::abs(g.loss - r.loss) <= 1e-12);
    }
}

TEST_CASE("propagate agrees with the pixel-major reference") {
    std::mt19937_64 rng(3);
    const TeacherConfig cfg{4, 0.05};
    TeacherMemory mem(cfg, 3);
    for (std::size_t k = 0; k < 3; ++k) {
        mem.add(TeacherMemory::encode(k, oracle::random_color(rng, 18, 14), oracle::random_mask(rng, 18, 14, 3), cfg));
    }
    const ColorImage q = oracle::random_color(rng, 18, 14);
    CHECK(max_abs_diff(propagate(q, mem).data(), reference::propagate(q, mem).data()) <= 1e-12);
}

TEST_CASE("results do not depend on the worker count") {
    SynthSpec s;
    s.num_frames = 4;
    s.noise_std = 4.0;
    const VideoSequence seq = generate_synthetic(s);
    const StudentParams theta = StudentParams::random(3, 1, 2.0);
    const GrayImage a = to_gray(seq.frame(0)), b = to_gray(seq.frame(3));

    double ssim1, ssim2;
    EvalReport e1, e2;
    {
        WorkerCap cap(1);
        CHECK(worker_count() == 1);
        ssim1 = compute_ssim(a, b);
        e1 = evaluate(seq, theta);
    }
    {
        WorkerCap cap(4);
        ssim2 = compute_ssim(a, b);
        e2 = evaluate(seq, theta);
    }
    CHECK(ssim1 == ssim2);
    CHECK(e1 == e2);
}

TEST_CASE("compensated summation") {
    std::vector<double> v{1.0, 1e100, 1.0, -1e100};
    CHECK(ordered_sum(v) == 2.0);
    CompensatedSum s;
    for (int i = 0; i < 10; ++i) s.add(0.1);
    CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-16));
}

}  // TEST_SUITE
