#include <eioutrack/scenario.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace eioutrack {

namespace {

void check_config(const ScenarioConfig& cfg) {
    const bool ok =
        cfg.n_targets >= 1 && cfg.n_frames >= 1 && cfg.arena_width > 0.0 &&
        cfg.arena_height > 0.0 && cfg.base_speed >= 0.0 && cfg.zigzag_period >= 1 &&
        cfg.burst_max_step >= 0.0 && cfg.box_width > 0.0 && cfg.box_height > 0.0 &&
        cfg.box_width <= cfg.arena_width && cfg.box_height <= cfg.arena_height &&
        cfg.miss_prob >= 0.0 && cfg.miss_prob <= 1.0 && cfg.jitter_sigma >= 0.0 &&
        cfg.conf_min >= 0.0 && cfg.conf_min <= cfg.conf_max && cfg.conf_max <= 1.0 &&
        cfg.embedding_dim >= 0 && cfg.embedding_noise >= 0.0 &&
        cfg.team_confusability >= 0.0 && cfg.team_confusability <= 1.0;
    if (!ok) {
        throw std::domain_error("generate: invalid scenario config");
    }
}

struct TargetState {
    double cx = 0.0;
    double cy = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

Embedding random_unit_vector(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Embedding v(dim);
    do {
        for (double& x : v) {
            x = gauss(rng);
        }
    } while (!(norm(v) > 1e-9));
    return normalized(v);
}

}  // namespace

Scenario generate(const ScenarioConfig& cfg) {
    check_config(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Scenario scenario;

    if (cfg.embedding_dim > 0) {
        scenario.identity_vectors.reserve(cfg.n_targets);
        for (int i = 0; i < cfg.n_targets; ++i) {
            scenario.identity_vectors.push_back(random_unit_vector(rng, cfg.embedding_dim));
        }
        if (cfg.team_confusability > 0.0) {
            // Blend each odd identity towards its even partner.
            for (int i = 1; i < cfg.n_targets; i += 2) {
                Embedding blended(cfg.embedding_dim);
                for (int d = 0; d < cfg.embedding_dim; ++d) {
                    blended[d] = cfg.team_confusability * scenario.identity_vectors[i - 1][d] +
                                 (1.0 - cfg.team_confusability) * scenario.identity_vectors[i][d];
                }
                scenario.identity_vectors[i] = normalized(blended);
            }
        }
    }

    const double half_w = 0.5 * cfg.box_width;
    const double half_h = 0.5 * cfg.box_height;
    const double min_cx = half_w;
    const double max_cx = cfg.arena_width - half_w;
    const double min_cy = half_h;
    const double max_cy = cfg.arena_height - half_h;

    std::vector<TargetState> targets(cfg.n_targets);
    for (TargetState& t : targets) {
        t.cx = min_cx + unit(rng) * (max_cx - min_cx);
        t.cy = min_cy + unit(rng) * (max_cy - min_cy);
        const double angle = unit(rng) * 2.0 * std::numbers::pi;
        t.vx = cfg.base_speed * std::cos(angle);
        t.vy = cfg.base_speed * std::sin(angle);
    }

    const auto gt_box = [&](const TargetState& t, double conf) {
        return BBox{t.cx - half_w, t.cy - half_h, t.cx + half_w, t.cy + half_h, conf};
    };

    scenario.detections.resize(cfg.n_frames);
    for (int f = 1; f <= cfg.n_frames; ++f) {
        std::vector<LabeledBox>& gt_frame = scenario.ground_truth[f];
        gt_frame.reserve(cfg.n_targets);
        for (int i = 0; i < cfg.n_targets; ++i) {
            gt_frame.push_back({i + 1, gt_box(targets[i], 1.0)});
        }

        // Detector pass over the ground truth of this frame.
        std::vector<Detection>& dets = scenario.detections[f - 1];
        for (int i = 0; i < cfg.n_targets; ++i) {
            const bool missed = unit(rng) < cfg.miss_prob;
            if (missed) {
                continue;
            }
            BBox box = gt_frame[i].box;
            if (cfg.jitter_sigma > 0.0) {
                const double dx = gauss(rng) * cfg.jitter_sigma;
                const double dy = gauss(rng) * cfg.jitter_sigma;
                const double dw = gauss(rng) * cfg.jitter_sigma;
                const double dh = gauss(rng) * cfg.jitter_sigma;
                const double w = std::max(1.0, cfg.box_width + dw);
                const double h = std::max(1.0, cfg.box_height + dh);
                const double cx = box.center_x() + dx;
                const double cy = box.center_y() + dy;
                box = BBox{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h, 0.0};
            }
            bool occluded = false;
            if (cfg.occlusion_low_conf) {
                for (int j = 0; j < cfg.n_targets; ++j) {
                    if (j != i && iou(gt_frame[i].box, gt_frame[j].box) > 0.0) {
                        occluded = true;
                        break;
                    }
                }
            }
            box.confidence = occluded ? 0.1 + unit(rng) * (cfg.conf_min - 0.1)
                                      : cfg.conf_min + unit(rng) * (cfg.conf_max - cfg.conf_min);

            Detection det;
            det.frame = f;
            det.box = box;
            if (cfg.embedding_dim > 0) {
                Embedding emb = scenario.identity_vectors[i];
                if (cfg.embedding_noise > 0.0) {
                    for (double& x : emb) {
                        x += gauss(rng) * cfg.embedding_noise;
                    }
                }
                det.embedding = normalized(emb);
            }
            dets.push_back(std::move(det));
        }
        std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
            return a.box.x1 != b.box.x1 ? a.box.x1 < b.box.x1 : a.box.y1 < b.box.y1;
        });

        // Advance motion for the next frame.
        for (TargetState& t : targets) {
            switch (cfg.motion) {
                case MotionModel::Linear:
                    break;
                case MotionModel::Zigzag:
                    if (f % cfg.zigzag_period == 0) {
                        t.vx = -t.vx;
                        t.vy = -t.vy;
                    }
                    break;
                case MotionModel::Burst: {
                    const double angle = unit(rng) * 2.0 * std::numbers::pi;
                    const double step = unit(rng) * cfg.burst_max_step;
                    t.vx = step * std::cos(angle);
                    t.vy = step * std::sin(angle);
                    break;
                }
            }
            t.cx += t.vx;
            t.cy += t.vy;
            // Reflect off the arena walls.
            if (t.cx < min_cx) {
                t.cx = std::min(2.0 * min_cx - t.cx, max_cx);
                t.vx = -t.vx;
            } else if (t.cx > max_cx) {
                t.cx = std::max(2.0 * max_cx - t.cx, min_cx);
                t.vx = -t.vx;
            }
            if (t.cy < min_cy) {
                t.cy = std::min(2.0 * min_cy - t.cy, max_cy);
                t.vy = -t.vy;
            } else if (t.cy > max_cy) {
                t.cy = std::max(2.0 * max_cy - t.cy, min_cy);
                t.vy = -t.vy;
            }
        }
    }
    return scenario;
}

}  // namespace eioutrack
