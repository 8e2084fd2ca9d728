#pragma once

#include <cstdint>
#include <vector>

#include <eioutrack/metrics.hpp>
#include <eioutrack/tracker.hpp>

namespace eioutrack {

enum class MotionModel { Linear, Zigzag, Burst };

// Synthetic sports-like benchmark: targets moving in an arena, observed by a
// noisy detector with per-identity appearance embeddings.
struct ScenarioConfig {
    int n_targets = 10;
    int n_frames = 300;
    double arena_width = 1920.0;
    double arena_height = 1080.0;

    MotionModel motion = MotionModel::Linear;
    double base_speed = 4.0;      // px/frame for linear and zigzag motion
    int zigzag_period = 25;       // frames between direction reversals
    double burst_max_step = 0.0;  // max per-frame displacement for burst motion

    double box_width = 40.0;
    double box_height = 80.0;

    double miss_prob = 0.0;      // probability a target goes undetected
    double jitter_sigma = 0.0;   // detector box noise, px
    double conf_min = 0.6;       // confidence range for clean detections
    double conf_max = 1.0;
    bool occlusion_low_conf = false;  // overlapping targets emit low-score detections

    int embedding_dim = 16;           // 0 disables embeddings
    double embedding_noise = 0.0;     // per-frame feature noise
    double team_confusability = 0.0;  // 0 independent identities, towards 1 near-parallel pairs

    std::uint64_t seed = 1;
};

struct Scenario {
    FrameLabels ground_truth;
    std::vector<std::vector<Detection>> detections;  // index f holds frame f+1
    std::vector<Embedding> identity_vectors;         // one per target; empty if disabled
};

// Deterministic for a fixed config. Ground-truth boxes stay inside the arena;
// detections are emitted in a canonical order (ascending x1, then y1). Throws
// std::domain_error on an invalid config.
Scenario generate(const ScenarioConfig& cfg);

}  // namespace eioutrack
