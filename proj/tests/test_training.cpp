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

#include <random>

#include "oracles.hpp"
#include "tcdistill/audit.hpp"
#include "tcdistill/losses.hpp"
#include "tcdistill/masks.hpp"
#include "tcdistill/metrics.hpp"
#include "tcdistill/serialize.hpp"
#include "tcdistill/store.hpp"
#include "tcdistill/synth.hpp"
#include "tcdistill/trainer.hpp"

using namespace tcd;
using nlohmann::json;
using Set = std::set<std::size_t>;

namespace {

std::map<std::size_t, ClassMask> blank_labels(std::initializer_list<std::size_t> frames) {
    std::map<std::size_t, ClassMask> out;
    for (std::size_t f : frames) out.emplace(f, ClassMask::filled(2, 2, 2, 0));
    return out;
}

VideoSequence small_video(std::size_t frames, double drift, double noise, std::size_t classes = 3,
                          std::uint64_t seed = 1) {
    SynthSpec s;
    s.width = 24;
    s.height = 24;
    s.num_frames = frames;
    s.classes = classes;
    s.num_blobs = 4;
    s.drift_px_per_frame = drift;
    s.noise_std = noise;
    s.seed = seed;
    return generate_synthetic(s);
}

}  // namespace

TEST_SUITE("training") {

TEST_CASE("tc_loss") {
    std::mt19937_64 rng(1);
    const SoftMask a = oracle::random_soft(rng, 4, 3, 3);
    const SoftMask b = oracle::random_soft(rng, 4, 3, 3);
    CHECK(tc_loss(a, a) == 0.0);
    CHECK(tc_loss(SoftMask(1, 1, 2, {1.0, 0.0}), SoftMask(1, 1, 2, {0.5, 0.5})) == doctest::Approx(0.5));
    CHECK(tc_loss(a, b) == tc_loss(b, a));
    CHECK_THROWS_AS(tc_loss(a, oracle::random_soft(rng, 3, 4, 3)), std::invalid_argument);
    CHECK_THROWS_AS(tc_loss(a, oracle::random_soft(rng, 4, 3, 2)), std::invalid_argument);
}

TEST_CASE("kf_loss") {
    std::mt19937_64 rng(2);
    const ClassMask m = oracle::random_mask(rng, 5, 5, 3);
    CHECK(kf_loss(mask_to_onehot(m), m) == 0.0);
    CHECK(kf_loss(SoftMask::uniform(5, 5, 2), oracle::random_mask(rng, 5, 5, 2)) == doctest::Approx(0.5));
    // one-hot on the wrong class everywhere attains the upper bound
    CHECK(kf_loss(mask_to_onehot(ClassMask::filled(3, 3, 3, 1)), ClassMask::filled(3, 3, 3, 2)) == 2.0);
    for (int i = 0; i < 20; ++i) {
        const double v = kf_loss(oracle::random_soft(rng, 5, 5, 3), m);
        CHECK(v >= 0.0);
        CHECK(v <= 2.0);
    }
    CHECK_THROWS_AS(kf_loss(SoftMask::uniform(4, 5, 3), m), std::invalid_argument);
}

TEST_CASE("total_loss") {
    CHECK(total_loss(0.2, 0.4, 1.0) == 0.2);
    CHECK(total_loss(0.2, 0.4, 0.0) == 0.4);
    CHECK(total_loss(0.2, 0.4, 0.5) == doctest::Approx(0.3));
    CHECK_THROWS_AS(total_loss(0.2, 0.4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(total_loss(0.2, 0.4, -0.1), std::invalid_argument);
}

TEST_CASE("temporal set construction") {
    KeyFrameStore a(5, blank_labels({0}));
    a.build_temporal_set();
    CHECK(a.temporal() == Set{1});
    a.build_temporal_set();
    CHECK(a.temporal() == Set{1});

    KeyFrameStore b(4, blank_labels({0, 1, 2, 3}));
    b.build_temporal_set();
    CHECK(b.temporal().empty());

    KeyFrameStore c(5, blank_labels({0, 4}));
    c.build_temporal_set();
    CHECK(c.temporal() == Set{1});
    CHECK_FALSE(c.invariant_violation());
}

TEST_CASE("promotion") {
    KeyFrameStore s(5, blank_labels({0}));
    s.build_temporal_set();
    s.promote(1, ClassMask::filled(2, 2, 2, 1));
    CHECK(s.keys() == Set{0, 1});
    CHECK(s.temporal() == Set{2});
    CHECK(s.label(1).provenance == Provenance::pseudo);
    CHECK(s.label(0).provenance == Provenance::manual);
    CHECK_THROWS_AS(s.promote(1, ClassMask::filled(2, 2, 2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(s.promote(3, ClassMask::filled(2, 2, 2, 1)), std::invalid_argument);

    KeyFrameStore last(5, blank_labels({0, 3}));
    last.build_temporal_set();
    CHECK(last.temporal() == Set{1, 4});
    last.promote(4, ClassMask::filled(2, 2, 2, 1));
    CHECK(last.keys() == Set{0, 3, 4});
    CHECK(last.temporal() == Set{1});

    // promoting into a gap that ends at a key does not re-add the key
    KeyFrameStore gap(5, blank_labels({0, 2}));
    gap.build_temporal_set();
    gap.promote(1, ClassMask::filled(2, 2, 2, 1));
    CHECK(gap.temporal() == Set{3});
    CHECK_FALSE(gap.invariant_violation());
}

TEST_CASE("store invariants survive random promotion sequences") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 15;
        std::map<std::size_t, ClassMask> manual;
        manual.emplace(0, ClassMask::filled(2, 2, 2, 0));
        for (std::size_t f = 1; f < n; ++f) {
            if (rng() % 4 == 0) manual.emplace(f, ClassMask::filled(2, 2, 2, 1));
        }
        const auto manual_copy = manual;
        KeyFrameStore s(n, manual);
        s.build_temporal_set();
        REQUIRE_FALSE(s.invariant_violation());
        while (!s.temporal().empty()) {
            auto it = s.temporal().begin();
            std::advance(it, static_cast<long>(rng() % s.temporal().size()));
            s.promote(*it, ClassMask::filled(2, 2, 2, 1));
            REQUIRE_FALSE(s.invariant_violation());
        }
        CHECK(s.keys().size() == n - (*manual_copy.begin()).first);
        for (const auto& [f, m] : manual_copy) {
            CHECK(s.label(f).provenance == Provenance::manual);
            CHECK(s.label(f).mask == m);
        }
    }
}

TEST_CASE("store rejects bad seeds") {
    CHECK_THROWS_AS(KeyFrameStore(5, {}), std::invalid_argument);
    CHECK_THROWS_AS(KeyFrameStore(5, blank_labels({5})), std::invalid_argument);
}

TEST_CASE("max_rounds zero leaves the student untouched") {
    const VideoSequence seq = small_video(5, 1.0, 0.0);
    const auto sel = SelectionResult::from_indices({0}, 5);
    TrainConfig cfg;
    cfg.max_rounds = 0;
    cfg.seed = 17;
    const TrainingResult r = run_training(seq, sel, truth_labels(seq, sel.key_indices), {}, cfg);
    CHECK(r.student == StudentParams::random(seq.classes(), 17));
    CHECK(r.history.rounds.empty());
    CHECK(r.store.keys() == Set{0});
}

TEST_CASE("loss never increases within a round") {
    const VideoSequence seq = small_video(6, 1.0, 2.0, 2);
    const auto sel = SelectionResult::from_indices({0}, 6);
    TrainConfig cfg;
    cfg.max_rounds = 3;
    cfg.epochs_per_round = 30;
    cfg.learning_rate = 50.0;  // large enough to need the halving safeguard
    const TrainingResult r = run_training(seq, sel, truth_labels(seq, sel.key_indices), {}, cfg);
    REQUIRE_FALSE(r.history.rounds.empty());
    bool halved = false;
    for (const auto& round : r.history.rounds) {
        double prev = round.initial_loss;
        for (double l : round.epoch_losses) {
            CHECK(l <= prev);
            prev = l;
        }
        halved = halved || round.final_step < cfg.learning_rate;
        CHECK(round.j_total >= 0.0);
        CHECK(round.j_total <= 2.0);
    }
    CHECK(halved);
}

TEST_CASE("alpha one reduces to key-frame-only training") {
    const VideoSequence seq = small_video(6, 1.0, 2.0);
    const auto sel = SelectionResult::from_indices({0, 3}, 6);
    TrainConfig cfg;
    cfg.alpha = 1.0;
    cfg.max_rounds = 1;
    cfg.epochs_per_round = 15;
    cfg.tc_threshold = 0.999999;
    const auto labels = truth_labels(seq, sel.key_indices);
    const TrainingResult tc = run_training(seq, sel, labels, {}, cfg);
    const SupervisedResult kf = fit_supervised(seq, labels, cfg);
    CHECK(tc.student == kf.student);
}

TEST_CASE("an unreachable gate promotes nothing") {
    const VideoSequence seq = small_video(8, 1.0, 3.0);
    const auto sel = SelectionResult::from_indices({0, 4}, 8);
    TrainConfig cfg;
    cfg.tc_threshold = 1.0 - 1e-12;
    cfg.max_rounds = 2;
    cfg.epochs_per_round = 10;
    const TrainingResult r = run_training(seq, sel, truth_labels(seq, sel.key_indices), {}, cfg);
    CHECK(r.store.keys() == Set{0, 4});
    CHECK(r.store.temporal() == Set{1, 5});
    for (const auto& round : r.history.rounds) CHECK(round.promotions.empty());
}

TEST_CASE("static video promotes every frame") {
    const VideoSequence seq = small_video(6, 0.0, 0.0);
    const auto sel = SelectionResult::from_indices({0}, 6);
    TrainConfig cfg;
    cfg.tc_threshold = 0.5;
    const TrainingResult r = run_training(seq, sel, truth_labels(seq, sel.key_indices), {}, cfg);
    CHECK(r.store.keys().size() == 6);
    CHECK(r.store.temporal().empty());
    for (std::size_t f = 1; f < 6; ++f) CHECK(r.store.label(f).provenance == Provenance::pseudo);
}

TEST_CASE("teacher memory is causal and the audit agrees") {
    const VideoSequence seq = small_video(12, 1.0, 2.0);
    const auto sel = SelectionResult::from_indices({0, 5, 9}, 12);
    TrainConfig cfg;
    cfg.tc_threshold = 0.6;
    cfg.learning_rate = 2.0;
    cfg.max_rounds = 4;
    cfg.epochs_per_round = 50;
    const TrainingResult r = run_training(seq, sel, truth_labels(seq, sel.key_indices), {}, cfg);
    for (const auto& round : r.history.rounds) {
        for (const auto& tr : round.temporal) {
            for (std::size_t m : tr.memory) CHECK(m < tr.frame);
            CHECK_FALSE(tr.memory.empty());
        }
    }
    const json store = store_to_json(r.store, r.history);
    const json hist = r.history;
    const AuditReport ok = audit_training(store, hist, seq, sel, cfg.tc_threshold);
    CHECK(ok.ok());
    CHECK(ok.memories_checked > 0);

    SUBCASE("tampered manual label") {
        json bad = store;
        for (auto& l : bad["labels"]) {
            if (l["frame"] == 5) l["checksum"] = "0000000000000000";
        }
        CHECK_FALSE(audit_training(bad, hist, seq, sel, cfg.tc_threshold).ok());
    }
    SUBCASE("memory that looks ahead") {
        json bad = hist;
        bad["rounds"][0]["temporal"][0]["memory"].push_back(9);
        CHECK_FALSE(audit_training(store, bad, seq, sel, cfg.tc_threshold).ok());
    }
    SUBCASE("promotion below the gate") {
        REQUIRE(ok.promotions_checked > 0);
        CHECK_FALSE(audit_training(store, hist, seq, sel, 0.999999).ok());
    }
    SUBCASE("broken successor closure") {
        REQUIRE_FALSE(store["temporal_indices"].empty());
        json bad = store;
        bad["temporal_indices"] = json::array();
        CHECK_FALSE(audit_training(bad, hist, seq, sel, cfg.tc_threshold).ok());
    }
}

TEST_CASE("training is deterministic") {
    const VideoSequence seq = small_video(8, 1.0, 3.0);
    const auto sel = SelectionResult::from_indices({0, 4}, 8);
    TrainConfig cfg;
    cfg.max_rounds = 3;
    cfg.epochs_per_round = 10;
    const auto labels = truth_labels(seq, sel.key_indices);
    const TrainingResult a = run_training(seq, sel, labels, {}, cfg);
    const TrainingResult b = run_training(seq, sel, labels, {}, cfg);
    CHECK(json(a.history).dump() == json(b.history).dump());
    CHECK(a.student == b.student);
}

TEST_CASE("run_training validates its inputs") {
    const VideoSequence seq = small_video(5, 1.0, 0.0);
    const auto sel = SelectionResult::from_indices({0, 2}, 5);
    CHECK_THROWS_AS(run_training(seq, sel, truth_labels(seq, std::vector<std::size_t>{0}), {}, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_training(seq, SelectionResult::from_indices({0}, 4), truth_labels(seq, std::vector<std::size_t>{0}), {}, {}),
                    std::invalid_argument);
    TrainConfig bad;
    bad.alpha = 2.0;
    CHECK_THROWS_AS(run_training(seq, sel, truth_labels(seq, sel.key_indices), {}, bad), std::invalid_argument);
    bad = TrainConfig{};
    bad.tc_threshold = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = TrainConfig{};
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE
