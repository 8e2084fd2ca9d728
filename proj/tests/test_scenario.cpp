#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <eioutrack/geometry.hpp>
#include <eioutrack/metrics.hpp>
#include <eioutrack/scenario.hpp>

using namespace eioutrack;

TEST_CASE("generation is deterministic per seed") {
    ScenarioConfig cfg;
    cfg.n_targets = 5;
    cfg.n_frames = 60;
    cfg.motion = MotionModel::Burst;
    cfg.burst_max_step = 40.0;
    cfg.miss_prob = 0.1;
    cfg.jitter_sigma = 1.0;
    cfg.embedding_dim = 6;
    cfg.embedding_noise = 0.05;
    cfg.seed = 123;

    const Scenario a = generate(cfg);
    const Scenario b = generate(cfg);
    REQUIRE(a.detections.size() == b.detections.size());
    for (std::size_t f = 0; f < a.detections.size(); ++f) {
        REQUIRE(a.detections[f].size() == b.detections[f].size());
        for (std::size_t i = 0; i < a.detections[f].size(); ++i) {
            CHECK(a.detections[f][i].box.x1 == b.detections[f][i].box.x1);
            CHECK(a.detections[f][i].box.confidence == b.detections[f][i].box.confidence);
            REQUIRE(a.detections[f][i].embedding.has_value());
            CHECK(*a.detections[f][i].embedding == *b.detections[f][i].embedding);
        }
    }

    cfg.seed = 124;
    const Scenario c = generate(cfg);
    bool any_difference = false;
    for (std::size_t f = 0; f < a.detections.size() && !any_difference; ++f) {
        if (a.detections[f].size() != c.detections[f].size()) {
            any_difference = true;
            break;
        }
        for (std::size_t i = 0; i < a.detections[f].size(); ++i) {
            if (a.detections[f][i].box.x1 != c.detections[f][i].box.x1) {
                any_difference = true;
                break;
            }
        }
    }
    CHECK(any_difference);
}

TEST_CASE("ground truth stays inside the arena") {
    ScenarioConfig cfg;
    cfg.n_targets = 8;
    cfg.n_frames = 200;
    cfg.motion = MotionModel::Burst;
    cfg.burst_max_step = 150.0;
    cfg.seed = 3;
    const Scenario scenario = generate(cfg);
    for (const auto& [frame, boxes] : scenario.ground_truth) {
        for (const LabeledBox& lb : boxes) {
            CHECK(lb.box.x1 >= -1e-9);
            CHECK(lb.box.y1 >= -1e-9);
            CHECK(lb.box.x2 <= cfg.arena_width + 1e-9);
            CHECK(lb.box.y2 <= cfg.arena_height + 1e-9);
        }
    }
}

TEST_CASE("certain misses drop every detection") {
    ScenarioConfig cfg;
    cfg.n_targets = 4;
    cfg.n_frames = 20;
    cfg.miss_prob = 1.0;
    const Scenario scenario = generate(cfg);
    for (const auto& dets : scenario.detections) {
        CHECK(dets.empty());
    }
}

TEST_CASE("a noiseless detector reproduces the ground truth") {
    ScenarioConfig cfg;
    cfg.n_targets = 5;
    cfg.n_frames = 50;
    cfg.motion = MotionModel::Linear;
    cfg.conf_min = 1.0;
    cfg.conf_max = 1.0;
    cfg.embedding_dim = 0;
    cfg.seed = 11;
    const Scenario scenario = generate(cfg);
    for (int f = 1; f <= cfg.n_frames; ++f) {
        const auto& dets = scenario.detections[f - 1];
        const auto& gt = scenario.ground_truth.at(f);
        REQUIRE(dets.size() == gt.size());
        for (const Detection& det : dets) {
            CHECK(det.box.confidence == 1.0);
            bool found = false;
            for (const LabeledBox& lb : gt) {
                if (lb.box.x1 == det.box.x1 && lb.box.y1 == det.box.y1 &&
                    lb.box.x2 == det.box.x2 && lb.box.y2 == det.box.y2) {
                    found = true;
                    break;
                }
            }
            CHECK(found);
        }
        // canonical emission order
        for (std::size_t i = 1; i < dets.size(); ++i) {
            CHECK(dets[i - 1].box.x1 <= dets[i].box.x1);
        }
    }
}

TEST_CASE("noiseless embeddings identify their target") {
    ScenarioConfig cfg;
    cfg.n_targets = 6;
    cfg.n_frames = 30;
    cfg.conf_min = 1.0;
    cfg.conf_max = 1.0;
    cfg.embedding_dim = 12;
    cfg.embedding_noise = 0.0;
    cfg.seed = 21;
    const Scenario scenario = generate(cfg);
    REQUIRE(scenario.identity_vectors.size() == 6);
    for (int f = 1; f <= cfg.n_frames; ++f) {
        const auto& gt = scenario.ground_truth.at(f);
        for (const Detection& det : scenario.detections[f - 1]) {
            REQUIRE(det.embedding.has_value());
            // locate the target by its exact box
            int target = -1;
            for (const LabeledBox& lb : gt) {
                if (lb.box.x1 == det.box.x1 && lb.box.y1 == det.box.y1) {
                    target = lb.id;
                    break;
                }
            }
            REQUIRE(target >= 1);
            int best = -1;
            double best_cost = 1e9;
            for (std::size_t i = 0; i < scenario.identity_vectors.size(); ++i) {
                const double c = cosine_cost(*det.embedding, scenario.identity_vectors[i]);
                if (c < best_cost) {
                    best_cost = c;
                    best = static_cast<int>(i) + 1;
                }
            }
            CHECK(best == target);
        }
    }
}

TEST_CASE("team confusability draws identity pairs together") {
    ScenarioConfig cfg;
    cfg.n_targets = 4;
    cfg.embedding_dim = 16;
    cfg.team_confusability = 0.95;
    cfg.seed = 31;
    const Scenario scenario = generate(cfg);
    CHECK(cosine_cost(scenario.identity_vectors[0], scenario.identity_vectors[1]) < 0.05);
    CHECK(cosine_cost(scenario.identity_vectors[2], scenario.identity_vectors[3]) < 0.05);
}

TEST_CASE("the ground truth scores perfectly against itself") {
    ScenarioConfig cfg;
    cfg.n_targets = 7;
    cfg.n_frames = 40;
    cfg.motion = MotionModel::Zigzag;
    cfg.seed = 41;
    const Scenario scenario = generate(cfg);
    LabeledFrameSet data;
    data.ground_truth = scenario.ground_truth;
    data.predictions = scenario.ground_truth;
    CHECK(hota(data).hota == 1.0);
    CHECK(clear_metrics(data, 0.5).mota == 1.0);
    CHECK(idf1(data, 0.5) == 1.0);
}

TEST_CASE("burst motion breaks plain IoU but not the expanded overlap") {
    ScenarioConfig cfg;
    cfg.n_targets = 10;
    cfg.n_frames = 300;
    cfg.motion = MotionModel::Burst;
    cfg.burst_max_step = 60.0;  // 1.5 box widths
    cfg.seed = 51;
    const Scenario scenario = generate(cfg);
    for (int target = 1; target <= cfg.n_targets; ++target) {
        bool found = false;
        for (int f = 1; f < cfg.n_frames && !found; ++f) {
            const auto& now = scenario.ground_truth.at(f);
            const auto& next = scenario.ground_truth.at(f + 1);
            const BBox* a = nullptr;
            const BBox* b = nullptr;
            for (const LabeledBox& lb : now) {
                if (lb.id == target) {
                    a = &lb.box;
                }
            }
            for (const LabeledBox& lb : next) {
                if (lb.id == target) {
                    b = &lb.box;
                }
            }
            REQUIRE(a != nullptr);
            REQUIRE(b != nullptr);
            if (iou(*a, *b) == 0.0 && eiou(*a, *b, 0.7) > 0.0) {
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("occlusion mode emits low-score detections for overlapping targets") {
    ScenarioConfig cfg;
    cfg.n_targets = 12;
    cfg.n_frames = 80;
    cfg.arena_width = 300.0;  // crowded: overlaps are frequent
    cfg.arena_height = 300.0;
    cfg.box_width = 60.0;
    cfg.box_height = 100.0;
    cfg.motion = MotionModel::Linear;
    cfg.occlusion_low_conf = true;
    cfg.seed = 61;
    const Scenario scenario = generate(cfg);
    int low = 0;
    int high = 0;
    for (const auto& dets : scenario.detections) {
        for (const Detection& det : dets) {
            CHECK(det.box.confidence >= 0.1);
            if (det.box.confidence < 0.6) {
                ++low;
            } else {
                ++high;
            }
        }
    }
    CHECK(low > 0);
    CHECK(high > 0);
}

TEST_CASE("invalid scenario configs are rejected") {
    ScenarioConfig cfg;
    cfg.n_targets = 0;
    CHECK_THROWS_AS(generate(cfg), std::domain_error);
    cfg = ScenarioConfig{};
    cfg.miss_prob = 1.5;
    CHECK_THROWS_AS(generate(cfg), std::domain_error);
    cfg = ScenarioConfig{};
    cfg.conf_min = 0.9;
    cfg.conf_max = 0.7;
    CHECK_THROWS_AS(generate(cfg), std::domain_error);
}
