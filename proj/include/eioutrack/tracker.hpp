#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <eioutrack/appearance.hpp>
#include <eioutrack/geometry.hpp>
#include <eioutrack/matrix.hpp>

namespace eioutrack {

struct Detection {
    int frame = 0;
    BBox box;
    std::optional<Embedding> embedding;
};

enum class TrackState { Unconfirmed, Tracked, Lost, Removed };

struct Track {
    int id = 0;
    TrackState state = TrackState::Unconfirmed;
    BBox last_box;
    std::optional<Embedding> feature;  // EMA-smoothed, unit norm
    int last_update_frame = 0;
    std::vector<std::pair<int, BBox>> history;  // strictly increasing frames
};

// Expansion scales for the iterative scale-up rounds: e_initial + step * t
// for round t in [0, t_total).
struct ExpansionSchedule {
    double e_initial = 0.7;
    double step = 0.1;
    int t_total = 2;
};

// Throws std::domain_error when t is outside [0, t_total).
double expansion_at(const ExpansionSchedule& schedule, int t);

struct TrackerConfig {
    double high_thresh = 0.6;  // detections at or above are high score
    double low_thresh = 0.1;   // below this, detections are dropped
    double tau_appearance = 0.25;
    double tau_eiou = 0.5;
    ExpansionSchedule schedule;
    double e_low = 0.7;          // expansion for low-score association
    double e_unconfirmed = 0.5;  // expansion for unconfirmed-track association
    int max_lost = 60;           // frames a lost track is kept
    double new_track_thresh = 0.7;
    double stage1_reject = 0.8;
    double stage2_reject = 0.5;
    double unconfirmed_reject = 0.7;
    double ema_alpha = 0.9;
    bool emit_unconfirmed = true;  // include just-created tracks in the frame output
};

// Throws ValidationError naming every out-of-range key.
void validate(const TrackerConfig& cfg);

// (high, low) split: conf >= high_thresh is high, [low_thresh, high_thresh)
// is low, the rest is dropped.
std::pair<std::vector<Detection>, std::vector<Detection>> split_detections(
    const std::vector<Detection>& dets, const TrackerConfig& cfg);

// First-stage cost matrix at expansion scale e: per pair, the minimum of the
// gated appearance cost and 1 - eiou. Pairs missing a feature or embedding
// fall back to the geometry cost.
Matrix stage1_cost(const std::vector<const Track*>& tracks,
                   const std::vector<const Detection*>& dets, double e,
                   const TrackerConfig& cfg);

struct TrackOutput {
    int id = 0;
    BBox box;
};

// Online association cascade over precomputed detections: split by score,
// iterative scale-up association of high-score detections, geometry-only
// rescue of low-score detections, unconfirmed-track confirmation, lifecycle.
// No motion model; tracks are matched against their last observed box.
class Tracker {
public:
    explicit Tracker(TrackerConfig cfg = {}, int first_id = 1);

    // Processes one frame and returns the tracks updated in it, ascending by
    // id. Frames must strictly increase; throws SequenceError otherwise.
    std::vector<TrackOutput> step(int frame, const std::vector<Detection>& detections);

    const TrackerConfig& config() const { return cfg_; }
    int last_frame() const { return last_frame_; }
    int next_id() const { return next_id_; }
    // Live tracks (unconfirmed, tracked, or lost), ascending by id.
    const std::vector<Track>& tracks() const { return pool_; }

private:
    void commit_match(Track& track, const Detection& det, int frame, bool update_feature);
    void spawn_track(const Detection& det, int frame);

    TrackerConfig cfg_;
    int last_frame_ = 0;
    int next_id_ = 1;
    std::vector<Track> pool_;
};

}  // namespace eioutrack
