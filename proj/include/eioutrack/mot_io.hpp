#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <eioutrack/interpolation.hpp>
#include <eioutrack/metrics.hpp>
#include <eioutrack/scenario.hpp>
#include <eioutrack/tracker.hpp>

namespace eioutrack {

// One line of a MOT text file: frame,id,x,y,w,h,conf[,class[,vis[,_]]].
// Boxes are converted to corner form on parse.
struct DetectionRecord {
    int frame = 0;
    int id = -1;
    BBox box;
    int class_id = -1;
    double visibility = -1.0;
};

// (frame, per-frame detection index) -> embedding
using EmbeddingTable = std::map<std::pair<int, int>, Embedding>;

std::vector<DetectionRecord> parse_detections(const std::filesystem::path& path);

// Text lines frame,det_index,v1,...,vD. expected_dim 0 adopts the first
// line's dimension. Zero vectors, dimension mismatches and duplicate keys
// are parse errors naming the line.
EmbeddingTable parse_embeddings(const std::filesystem::path& path, int expected_dim);

// Labeled boxes (id >= 0 required) for evaluation, either side.
FrameLabels parse_ground_truth(const std::filesystem::path& path);

// Result lines frame,id,x,y,w,h,conf,-1,-1,-1 sorted by frame then id,
// coordinates rounded to 2 decimals.
void write_results(const std::vector<Trajectory>& trajectories,
                   const std::filesystem::path& path);

// A sequence ready to track: per-class, per-frame detections with any
// embeddings attached.
struct SequenceBundle {
    std::string name;
    double frame_rate = 30.0;
    std::map<int, std::map<int, std::vector<Detection>>> by_class;
    std::optional<FrameLabels> ground_truth;
};

// Groups records by class (all under class -1 when per_class is false) and
// attaches embeddings by (frame, index in file order). An embedding that
// references a nonexistent detection is a parse error.
SequenceBundle make_bundle(const std::vector<DetectionRecord>& records,
                           const EmbeddingTable& embeddings, bool per_class);

struct RunConfig {
    TrackerConfig tracker;
    bool interpolate = true;
    int interpolation_max_gap = 20;
    double eval_iou_threshold = 0.5;
    bool per_class = false;
    int embedding_dim = 0;  // 0 adopts the embedding file's dimension
};

void validate(const RunConfig& cfg);

// Defaults when path is absent; otherwise a JSON object with the documented
// keys. Unknown keys and out-of-range values raise ValidationError.
RunConfig load_run_config(const std::optional<std::filesystem::path>& path);

ScenarioConfig load_scenario_config(const std::filesystem::path& path);

// Sets one numeric config key by name (sweepable keys); validates the result.
void apply_param(RunConfig& cfg, const std::string& name, double value);

// Tracks every class of the bundle with a shared id counter and returns the
// finished trajectories ascending by id, interpolated when configured.
std::vector<Trajectory> run_tracking(const SequenceBundle& bundle, const RunConfig& cfg);

FrameLabels trajectories_to_labels(const std::vector<Trajectory>& trajectories);

// Full file pipeline behind the `track` subcommand.
void track_files(const std::filesystem::path& dets_path,
                 const std::optional<std::filesystem::path>& embs_path, const RunConfig& cfg,
                 const std::filesystem::path& out_path);

// Scenario files (gt.txt, det.txt and, with embeddings, embed.txt) in the
// same formats the parsers read.
void write_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

std::string format_report_text(const MetricsReport& report);
std::string report_to_json(const MetricsReport& report);

struct SweepRow {
    double value = 0.0;
    MetricsReport report;
};

std::vector<SweepRow> run_sweep(const SequenceBundle& bundle, const FrameLabels& ground_truth,
                                const RunConfig& base, const std::string& param,
                                const std::vector<double>& values);

// One comment line, one header line, one space-separated row per value.
std::string format_sweep_table(const std::string& param, const std::vector<SweepRow>& rows);

}  // namespace eioutrack
