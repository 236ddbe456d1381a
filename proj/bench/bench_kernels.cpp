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

// Parallel kernels against their serial references on synthetic frames.
// Thread count follows OMP_NUM_THREADS / TCDISTILL_THREADS.

#include <benchmark/benchmark.h>

#include "tcdistill/features.hpp"
#include "tcdistill/masks.hpp"
#include "tcdistill/parallel.hpp"
#include "tcdistill/reference.hpp"
#include "tcdistill/ssim.hpp"
#include "tcdistill/student.hpp"
#include "tcdistill/synth.hpp"
#include "tcdistill/teacher.hpp"

namespace {

using namespace tcd;

VideoSequence make_video(std::size_t side, std::size_t frames) {
    SynthSpec s;
    s.width = side;
    s.height = side;
    s.num_frames = frames;
    s.num_blobs = 8;
    s.noise_std = 4.0;
    return generate_synthetic(s);
}

struct Fixture {
    explicit Fixture(std::size_t side) : video(make_video(side, 5)), memory(TeacherConfig{}, video.classes()) {
        phi = extract_features(video.frame(0));
        theta = StudentParams::random(video.classes(), 7, 0.5);
        target = mask_to_onehot(video.truth(0));
        for (std::size_t k = 0; k < 4; ++k) {
            memory.add(TeacherMemory::encode(k, video.frame(k), video.truth(k), memory.config()));
        }
    }
    VideoSequence video;
    PixelFeatures phi;
    StudentParams theta;
    SoftMask target;
    TeacherMemory memory;
};

const Fixture& fixture(std::size_t side) {
    static Fixture f64(64), f128(128);
    return side == 64 ? f64 : f128;
}

template <bool Parallel>
void BM_Ssim(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
    const GrayImage a = to_gray(f.video.frame(0));
    const GrayImage b = to_gray(f.video.frame(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? compute_ssim(a, b) : reference::compute_ssim(a, b));
    }
}

template <bool Parallel>
void BM_Features(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto phi = Parallel ? extract_features(f.video.frame(0)) : reference::extract_features(f.video.frame(0));
        benchmark::DoNotOptimize(phi.values.data());
    }
}

template <bool Parallel>
void BM_Forward(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto p = Parallel ? student_forward(f.phi, f.theta) : reference::student_forward(f.phi, f.theta);
        benchmark::DoNotOptimize(p.data().data());
    }
}

template <bool Parallel>
void BM_Backward(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto g = Parallel ? student_backward(f.phi, f.theta, f.target, 1.0)
                          : reference::student_backward(f.phi, f.theta, f.target, 1.0);
        benchmark::DoNotOptimize(g.weights.data());
    }
}

template <bool Parallel>
void BM_Propagate(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto m = Parallel ? propagate(f.video.frame(4), f.memory) : reference::propagate(f.video.frame(4), f.memory);
        benchmark::DoNotOptimize(m.data().data());
    }
}

#define TCD_PAIR(fn)                                                      \
    BENCHMARK(fn<false>)->Name(#fn "/serial")->Arg(64)->Arg(128);         \
    BENCHMARK(fn<true>)->Name(#fn "/parallel")->Arg(64)->Arg(128)->UseRealTime()

TCD_PAIR(BM_Ssim);
TCD_PAIR(BM_Features);
TCD_PAIR(BM_Forward);
TCD_PAIR(BM_Backward);
TCD_PAIR(BM_Propagate);

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::AddCustomContext("workers", std::to_string(worker_count()));
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
