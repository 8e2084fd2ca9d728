#include <eioutrack/tracker.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include <eioutrack/assignment.hpp>
#include <eioutrack/errors.hpp>
#include <eioutrack/kernels.hpp>

namespace eioutrack {

double expansion_at(const ExpansionSchedule& schedule, int t) {
    if (t < 0 || t >= schedule.t_total) {
        throw std::domain_error("expansion_at: round index out of range");
    }
    return schedule.e_initial + schedule.step * t;
}

void validate(const TrackerConfig& cfg) {
    std::string bad;
    const auto flag = [&bad](bool ok, const char* key) {
        if (!ok) {
            bad += bad.empty() ? key : (std::string(", ") + key);
        }
    };
    flag(cfg.low_thresh >= 0.0 && cfg.low_thresh < cfg.high_thresh && cfg.high_thresh <= 1.0,
         "high_thresh/low_thresh");
    flag(cfg.tau_appearance >= 0.0, "tau_appearance");
    flag(cfg.tau_eiou >= 0.0, "tau_eiou");
    flag(cfg.schedule.e_initial >= -0.5, "e_initial");
    flag(cfg.schedule.step >= 0.0, "e_step");
    flag(cfg.schedule.t_total >= 0, "t_total");
    flag(cfg.e_low >= -0.5, "e_low");
    flag(cfg.e_unconfirmed >= -0.5, "e_unconfirmed");
    flag(cfg.max_lost >= 0, "max_lost");
    flag(cfg.new_track_thresh >= 0.0 && cfg.new_track_thresh <= 1.0, "new_track_thresh");
    flag(cfg.stage1_reject > 0.0, "stage1_reject");
    flag(cfg.stage2_reject > 0.0, "stage2_reject");
    flag(cfg.unconfirmed_reject > 0.0, "unconfirmed_reject");
    flag(cfg.ema_alpha >= 0.0 && cfg.ema_alpha <= 1.0, "ema_alpha");
    if (!bad.empty()) {
        throw ValidationError("invalid tracker config: " + bad);
    }
}

std::pair<std::vector<Detection>, std::vector<Detection>> split_detections(
    const std::vector<Detection>& dets, const TrackerConfig& cfg) {
    std::vector<Detection> high;
    std::vector<Detection> low;
    for (const Detection& d : dets) {
        if (d.box.confidence >= cfg.high_thresh) {
            high.push_back(d);
        } else if (d.box.confidence >= cfg.low_thresh) {
            low.push_back(d);
        }
    }
    return {std::move(high), std::move(low)};
}

Matrix stage1_cost(const std::vector<const Track*>& tracks,
                   const std::vector<const Detection*>& dets, double e,
                   const TrackerConfig& cfg) {
    std::vector<BBox> track_boxes;
    std::vector<const Embedding*> track_features;
    track_boxes.reserve(tracks.size());
    track_features.reserve(tracks.size());
    for (const Track* t : tracks) {
        track_boxes.push_back(t->last_box);
        track_features.push_back(t->feature ? &*t->feature : nullptr);
    }
    std::vector<BBox> det_boxes;
    std::vector<const Embedding*> det_embeddings;
    det_boxes.reserve(dets.size());
    det_embeddings.reserve(dets.size());
    for (const Detection* d : dets) {
        det_boxes.push_back(d->box);
        det_embeddings.push_back(d->embedding ? &*d->embedding : nullptr);
    }
    return fused_cost_matrix(track_boxes, track_features, det_boxes, det_embeddings, e,
                             cfg.tau_appearance, cfg.tau_eiou);
}

Tracker::Tracker(TrackerConfig cfg, int first_id) : cfg_(cfg), next_id_(first_id) {
    validate(cfg_);
    if (first_id < 1) {
        throw ValidationError("invalid tracker config: first_id");
    }
}

void Tracker::commit_match(Track& track, const Detection& det, int frame, bool update_feature) {
    track.last_box = det.box;
    track.last_update_frame = frame;
    track.history.emplace_back(frame, det.box);
    track.state = TrackState::Tracked;
    if (update_feature && det.embedding) {
        if (track.feature) {
            track.feature = update_track_feature(*track.feature, *det.embedding, cfg_.ema_alpha);
        } else {
            track.feature = normalized(*det.embedding);
        }
    }
}

void Tracker::spawn_track(const Detection& det, int frame) {
    Track track;
    track.id = next_id_++;
    track.state = TrackState::Unconfirmed;
    track.last_box = det.box;
    track.last_update_frame = frame;
    track.history.emplace_back(frame, det.box);
    if (det.embedding) {
        track.feature = normalized(*det.embedding);
    }
    pool_.push_back(std::move(track));
}

std::vector<TrackOutput> Tracker::step(int frame, const std::vector<Detection>& detections) {
    if (frame < 1 || frame <= last_frame_) {
        throw SequenceError("step: frame " + std::to_string(frame) +
                            " does not follow frame " + std::to_string(last_frame_));
    }
    for (const Detection& d : detections) {
        if (d.frame != frame) {
            throw std::invalid_argument("step: detection frame index mismatch");
        }
        if (!valid_box(d.box)) {
            throw std::invalid_argument("step: invalid detection box");
        }
    }
    last_frame_ = frame;

    auto [high, low] = split_detections(detections, cfg_);

    std::vector<int> open_tracks;   // pool indices in state Tracked or Lost
    std::vector<int> unconfirmed;   // pool indices in state Unconfirmed
    for (int i = 0; i < static_cast<int>(pool_.size()); ++i) {
        if (pool_[i].state == TrackState::Tracked || pool_[i].state == TrackState::Lost) {
            open_tracks.push_back(i);
        } else if (pool_[i].state == TrackState::Unconfirmed) {
            unconfirmed.push_back(i);
        }
    }

    // Stage 1: iterative scale-up rounds over high-score detections; matches
    // commit per round, leftovers carry into the next round at a larger scale.
    std::vector<int> open_high(high.size());
    std::iota(open_high.begin(), open_high.end(), 0);
    for (int t = 0; t < cfg_.schedule.t_total; ++t) {
        if (open_tracks.empty() || open_high.empty()) {
            break;
        }
        std::vector<const Track*> track_view;
        std::vector<const Detection*> det_view;
        for (int i : open_tracks) {
            track_view.push_back(&pool_[i]);
        }
        for (int c : open_high) {
            det_view.push_back(&high[c]);
        }
        const Matrix costs = stage1_cost(track_view, det_view, expansion_at(cfg_.schedule, t), cfg_);
        const MatchResult res = solve(costs, cfg_.stage1_reject);
        for (const auto& [r, c] : res.matches) {
            commit_match(pool_[open_tracks[r]], high[open_high[c]], frame, true);
        }
        std::vector<int> next_tracks;
        std::vector<int> next_high;
        for (int r : res.unmatched_rows) {
            next_tracks.push_back(open_tracks[r]);
        }
        for (int c : res.unmatched_cols) {
            next_high.push_back(open_high[c]);
        }
        open_tracks = std::move(next_tracks);
        open_high = std::move(next_high);
    }

    // Stage 2: geometry-only association of low-score detections; appearance
    // features are left untouched.
    if (!open_tracks.empty() && !low.empty()) {
        std::vector<BBox> track_boxes;
        std::vector<BBox> det_boxes;
        for (int i : open_tracks) {
            track_boxes.push_back(pool_[i].last_box);
        }
        for (const Detection& d : low) {
            det_boxes.push_back(d.box);
        }
        const Matrix costs = eiou_cost_matrix(track_boxes, det_boxes, cfg_.e_low);
        const MatchResult res = solve(costs, cfg_.stage2_reject);
        for (const auto& [r, c] : res.matches) {
            commit_match(pool_[open_tracks[r]], low[c], frame, false);
        }
        std::vector<int> next_tracks;
        for (int r : res.unmatched_rows) {
            next_tracks.push_back(open_tracks[r]);
        }
        open_tracks = std::move(next_tracks);
    }

    // Unconfirmed tracks get one chance against the leftover high detections.
    if (!unconfirmed.empty()) {
        std::vector<BBox> track_boxes;
        std::vector<BBox> det_boxes;
        for (int i : unconfirmed) {
            track_boxes.push_back(pool_[i].last_box);
        }
        for (int c : open_high) {
            det_boxes.push_back(high[c].box);
        }
        const Matrix costs = eiou_cost_matrix(track_boxes, det_boxes, cfg_.e_unconfirmed);
        const MatchResult res = solve(costs, cfg_.unconfirmed_reject);
        for (const auto& [r, c] : res.matches) {
            commit_match(pool_[unconfirmed[r]], high[open_high[c]], frame, false);
        }
        for (int r : res.unmatched_rows) {
            pool_[unconfirmed[r]].state = TrackState::Removed;
        }
        std::vector<int> next_high;
        for (int c : res.unmatched_cols) {
            next_high.push_back(open_high[c]);
        }
        open_high = std::move(next_high);
    }

    // Lifecycle: unmatched tracked tracks become lost, stale lost tracks are
    // removed, leftover high-score detections may spawn new tracks.
    for (int i : open_tracks) {
        if (pool_[i].state == TrackState::Tracked) {
            pool_[i].state = TrackState::Lost;
        }
    }
    for (Track& track : pool_) {
        if (track.state == TrackState::Lost &&
            frame - track.last_update_frame > cfg_.max_lost) {
            track.state = TrackState::Removed;
        }
    }
    for (int c : open_high) {
        if (high[c].box.confidence >= cfg_.new_track_thresh) {
            spawn_track(high[c], frame);
        }
    }

    std::vector<TrackOutput> out;
    for (const Track& track : pool_) {
        if (track.last_update_frame != frame) {
            continue;
        }
        if (track.state == TrackState::Tracked ||
            (cfg_.emit_unconfirmed && track.state == TrackState::Unconfirmed)) {
            out.push_back({track.id, track.last_box});
        }
    }

    pool_.erase(std::remove_if(pool_.begin(), pool_.end(),
                               [](const Track& t) { return t.state == TrackState::Removed; }),
                pool_.end());
    return out;
}

}  // namespace eioutrack
