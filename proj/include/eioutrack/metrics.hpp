#pragma once

#include <map>
#include <vector>

#include <eioutrack/geometry.hpp>

namespace eioutrack {

struct LabeledBox {
    int id = 0;
    BBox box;
};

// frame index -> labeled boxes present in that frame
using FrameLabels = std::map<int, std::vector<LabeledBox>>;

// Ground truth and predictions over one sequence. Identities must be unique
// within a frame on each side.
struct LabeledFrameSet {
    FrameLabels ground_truth;
    FrameLabels predictions;
};

struct ClearResult {
    double mota = 0.0;
    int id_switches = 0;
    int fragmentations = 0;
    int false_positives = 0;
    int false_negatives = 0;
    int ground_truth_total = 0;
};

// CLEAR accounting: per-frame matching that first keeps the previous frame's
// correspondences, then fills in with min-cost IoU matching at the threshold.
ClearResult clear_metrics(const LabeledFrameSet& data, double iou_threshold);

// Identity-F1 from a global one-to-one pairing of ground-truth and predicted
// identities that maximizes frame-aligned co-detections at the threshold.
double idf1(const LabeledFrameSet& data, double iou_threshold);

struct HotaResult {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
};

// The 19-point threshold grid 0.05, 0.10, ..., 0.95.
std::vector<double> default_hota_alphas();

// Higher-order tracking accuracy: per-frame one-to-one matching guided by
// global association alignment, scored per alpha and averaged arithmetically.
// Parallel across frames.
HotaResult hota(const LabeledFrameSet& data,
                const std::vector<double>& alphas = default_hota_alphas());

// Everything above in one report.
struct MetricsReport {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    double mota = 0.0;
    double idf1 = 0.0;
    int id_switches = 0;
    int fragmentations = 0;
    int false_positives = 0;
    int false_negatives = 0;
};

MetricsReport evaluate(const LabeledFrameSet& data, double iou_threshold);

namespace serial {

// Single-threaded reference; bit-identical to the parallel version.
HotaResult hota(const LabeledFrameSet& data,
                const std::vector<double>& alphas = default_hota_alphas());

}  // namespace serial

}  // namespace eioutrack
