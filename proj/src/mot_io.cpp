#include <eioutrack/mot_io.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include <eioutrack/errors.hpp>

namespace eioutrack {

namespace {

using nlohmann::json;

std::string loc(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.push_back("");
    }
    return fields;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
            ++pos;
        }
        if (pos != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": malformed numeric field '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& where) {
    const double v = parse_double(s, where);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ParseError(where + ": expected integer, got '" + s + "'");
    }
    return i;
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::size_t, const std::string&)>& fn) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        fn(lineno, line);
    }
}

DetectionRecord parse_record(const std::string& line, const std::string& where) {
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() < 7 || fields.size() > 10) {
        throw ParseError(where + ": expected 7-10 comma-separated fields, got " +
                         std::to_string(fields.size()));
    }
    DetectionRecord rec;
    rec.frame = parse_int(fields[0], where);
    rec.id = parse_int(fields[1], where);
    const double x = parse_double(fields[2], where);
    const double y = parse_double(fields[3], where);
    const double w = parse_double(fields[4], where);
    const double h = parse_double(fields[5], where);
    const double conf = parse_double(fields[6], where);
    if (rec.frame < 1) {
        throw ParseError(where + ": frame index must be >= 1");
    }
    if (w < 0.0 || h < 0.0) {
        throw ParseError(where + ": negative box size");
    }
    if (conf < 0.0 || conf > 1.0) {
        throw ParseError(where + ": confidence out of [0,1]");
    }
    rec.box = BBox{x, y, x + w, y + h, conf};
    if (fields.size() >= 8) {
        rec.class_id = parse_int(fields[7], where);
    }
    if (fields.size() >= 9) {
        rec.visibility = parse_double(fields[8], where);
    }
    return rec;
}

}  // namespace

std::vector<DetectionRecord> parse_detections(const std::filesystem::path& path) {
    std::vector<DetectionRecord> records;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        records.push_back(parse_record(line, loc(path, lineno)));
    });
    return records;
}

EmbeddingTable parse_embeddings(const std::filesystem::path& path, int expected_dim) {
    if (expected_dim < 0) {
        throw ValidationError("embedding_dim must be >= 0");
    }
    EmbeddingTable table;
    int dim = expected_dim;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        const std::string where = loc(path, lineno);
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() < 3) {
            throw ParseError(where + ": expected frame,det_index,v1,...");
        }
        const int frame = parse_int(fields[0], where);
        const int det_index = parse_int(fields[1], where);
        if (frame < 1 || det_index < 0) {
            throw ParseError(where + ": bad frame or detection index");
        }
        Embedding emb;
        emb.reserve(fields.size() - 2);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            emb.push_back(parse_double(fields[i], where));
        }
        if (dim == 0) {
            dim = static_cast<int>(emb.size());
        }
        if (static_cast<int>(emb.size()) != dim) {
            throw ParseError(where + ": embedding dimension " + std::to_string(emb.size()) +
                             " does not match expected " + std::to_string(dim));
        }
        if (!(norm(emb) > 0.0)) {
            throw ParseError(where + ": zero-norm embedding rejected");
        }
        if (!table.emplace(std::make_pair(frame, det_index), std::move(emb)).second) {
            throw ParseError(where + ": duplicate embedding for frame " + std::to_string(frame) +
                             " detection " + std::to_string(det_index));
        }
    });
    return table;
}

FrameLabels parse_ground_truth(const std::filesystem::path& path) {
    FrameLabels labels;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        const std::string where = loc(path, lineno);
        const DetectionRecord rec = parse_record(line, where);
        if (rec.id < 0) {
            throw ParseError(where + ": labeled file needs identity ids >= 0");
        }
        labels[rec.frame].push_back({rec.id, rec.box});
    });
    return labels;
}

void write_results(const std::vector<Trajectory>& trajectories,
                   const std::filesystem::path& path) {
    struct Row {
        int frame;
        int id;
        BBox box;
    };
    std::vector<Row> rows;
    for (const Trajectory& traj : trajectories) {
        for (const auto& [frame, box] : traj.entries) {
            rows.push_back({frame, traj.id, box});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
    });

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    char buf[256];
    for (const Row& row : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,%.2f,-1,-1,-1\n", row.frame,
                      row.id, row.box.x1, row.box.y1, row.box.width(), row.box.height(),
                      row.box.confidence);
        out << buf;
    }
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

SequenceBundle make_bundle(const std::vector<DetectionRecord>& records,
                           const EmbeddingTable& embeddings, bool per_class) {
    SequenceBundle bundle;
    std::map<int, int> frame_counter;  // per-frame detection index in file order
    std::set<std::pair<int, int>> consumed;
    for (const DetectionRecord& rec : records) {
        const int index = frame_counter[rec.frame]++;
        Detection det;
        det.frame = rec.frame;
        det.box = rec.box;
        const auto it = embeddings.find({rec.frame, index});
        if (it != embeddings.end()) {
            det.embedding = it->second;
            consumed.insert(it->first);
        }
        const int cls = per_class ? rec.class_id : -1;
        bundle.by_class[cls][rec.frame].push_back(std::move(det));
    }
    if (consumed.size() != embeddings.size()) {
        for (const auto& [key, _] : embeddings) {
            if (!consumed.count(key)) {
                throw ParseError("embedding references nonexistent detection: frame " +
                                 std::to_string(key.first) + " index " +
                                 std::to_string(key.second));
            }
        }
    }
    return bundle;
}

void validate(const RunConfig& cfg) {
    validate(cfg.tracker);
    std::string bad;
    const auto flag = [&bad](bool ok, const char* key) {
        if (!ok) {
            bad += bad.empty() ? key : (std::string(", ") + key);
        }
    };
    flag(cfg.interpolation_max_gap >= 1, "interpolation_max_gap");
    flag(cfg.eval_iou_threshold > 0.0 && cfg.eval_iou_threshold < 1.0, "eval_iou_threshold");
    flag(cfg.embedding_dim >= 0, "embedding_dim");
    if (!bad.empty()) {
        throw ValidationError("invalid run config: " + bad);
    }
}

namespace {

json load_json_object(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) {
        throw ValidationError(path.string() + ": top-level JSON object expected");
    }
    return j;
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config key '") + key + "' has the wrong type");
    }
}

const std::vector<std::string> kRunConfigKeys = {
    "high_thresh",        "low_thresh",      "tau_appearance",
    "tau_eiou",           "e_initial",       "e_step",
    "t_total",            "e_low",           "e_unconfirmed",
    "max_lost",           "new_track_thresh", "stage1_reject",
    "stage2_reject",      "unconfirmed_reject", "ema_alpha",
    "emit_unconfirmed",   "interpolate",     "interpolation_max_gap",
    "eval_iou_threshold", "per_class",       "embedding_dim"};

void check_known_keys(const json& j, const std::vector<std::string>& known,
                      const std::string& what) {
    std::string unknown;
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            unknown += unknown.empty() ? key : (", " + key);
        }
    }
    if (!unknown.empty()) {
        throw ValidationError("unknown " + what + " key(s): " + unknown);
    }
}

}  // namespace

RunConfig load_run_config(const std::optional<std::filesystem::path>& path) {
    RunConfig cfg;
    if (path) {
        const json j = load_json_object(*path);
        check_known_keys(j, kRunConfigKeys, "run config");
        read_key(j, "high_thresh", cfg.tracker.high_thresh);
        read_key(j, "low_thresh", cfg.tracker.low_thresh);
        read_key(j, "tau_appearance", cfg.tracker.tau_appearance);
        read_key(j, "tau_eiou", cfg.tracker.tau_eiou);
        read_key(j, "e_initial", cfg.tracker.schedule.e_initial);
        read_key(j, "e_step", cfg.tracker.schedule.step);
        read_key(j, "t_total", cfg.tracker.schedule.t_total);
        read_key(j, "e_low", cfg.tracker.e_low);
        read_key(j, "e_unconfirmed", cfg.tracker.e_unconfirmed);
        read_key(j, "max_lost", cfg.tracker.max_lost);
        read_key(j, "new_track_thresh", cfg.tracker.new_track_thresh);
        read_key(j, "stage1_reject", cfg.tracker.stage1_reject);
        read_key(j, "stage2_reject", cfg.tracker.stage2_reject);
        read_key(j, "unconfirmed_reject", cfg.tracker.unconfirmed_reject);
        read_key(j, "ema_alpha", cfg.tracker.ema_alpha);
        read_key(j, "emit_unconfirmed", cfg.tracker.emit_unconfirmed);
        read_key(j, "interpolate", cfg.interpolate);
        read_key(j, "interpolation_max_gap", cfg.interpolation_max_gap);
        read_key(j, "eval_iou_threshold", cfg.eval_iou_threshold);
        read_key(j, "per_class", cfg.per_class);
        read_key(j, "embedding_dim", cfg.embedding_dim);
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    static const std::vector<std::string> known = {
        "n_targets",        "n_frames",       "arena_width",     "arena_height",
        "motion",           "base_speed",     "zigzag_period",   "burst_max_step",
        "box_width",        "box_height",     "miss_prob",       "jitter_sigma",
        "conf_min",         "conf_max",       "occlusion_low_conf", "embedding_dim",
        "embedding_noise",  "team_confusability", "seed"};
    const json j = load_json_object(path);
    check_known_keys(j, known, "scenario config");

    ScenarioConfig cfg;
    read_key(j, "n_targets", cfg.n_targets);
    read_key(j, "n_frames", cfg.n_frames);
    read_key(j, "arena_width", cfg.arena_width);
    read_key(j, "arena_height", cfg.arena_height);
    if (j.contains("motion")) {
        const std::string motion = j["motion"].get<std::string>();
        if (motion == "linear") {
            cfg.motion = MotionModel::Linear;
        } else if (motion == "zigzag") {
            cfg.motion = MotionModel::Zigzag;
        } else if (motion == "burst") {
            cfg.motion = MotionModel::Burst;
        } else {
            throw ValidationError("unknown motion model: " + motion);
        }
    }
    read_key(j, "base_speed", cfg.base_speed);
    read_key(j, "zigzag_period", cfg.zigzag_period);
    read_key(j, "burst_max_step", cfg.burst_max_step);
    read_key(j, "box_width", cfg.box_width);
    read_key(j, "box_height", cfg.box_height);
    read_key(j, "miss_prob", cfg.miss_prob);
    read_key(j, "jitter_sigma", cfg.jitter_sigma);
    read_key(j, "conf_min", cfg.conf_min);
    read_key(j, "conf_max", cfg.conf_max);
    read_key(j, "occlusion_low_conf", cfg.occlusion_low_conf);
    read_key(j, "embedding_dim", cfg.embedding_dim);
    read_key(j, "embedding_noise", cfg.embedding_noise);
    read_key(j, "team_confusability", cfg.team_confusability);
    read_key(j, "seed", cfg.seed);
    return cfg;
}

void apply_param(RunConfig& cfg, const std::string& name, double value) {
    if (name == "e_initial") {
        cfg.tracker.schedule.e_initial = value;
    } else if (name == "e_step") {
        cfg.tracker.schedule.step = value;
    } else if (name == "t_total") {
        cfg.tracker.schedule.t_total = static_cast<int>(value);
    } else if (name == "e_low") {
        cfg.tracker.e_low = value;
    } else if (name == "e_unconfirmed") {
        cfg.tracker.e_unconfirmed = value;
    } else if (name == "high_thresh") {
        cfg.tracker.high_thresh = value;
    } else if (name == "low_thresh") {
        cfg.tracker.low_thresh = value;
    } else if (name == "tau_appearance") {
        cfg.tracker.tau_appearance = value;
    } else if (name == "tau_eiou") {
        cfg.tracker.tau_eiou = value;
    } else if (name == "stage1_reject") {
        cfg.tracker.stage1_reject = value;
    } else if (name == "stage2_reject") {
        cfg.tracker.stage2_reject = value;
    } else if (name == "unconfirmed_reject") {
        cfg.tracker.unconfirmed_reject = value;
    } else if (name == "ema_alpha") {
        cfg.tracker.ema_alpha = value;
    } else if (name == "new_track_thresh") {
        cfg.tracker.new_track_thresh = value;
    } else if (name == "max_lost") {
        cfg.tracker.max_lost = static_cast<int>(value);
    } else if (name == "interpolation_max_gap") {
        cfg.interpolation_max_gap = static_cast<int>(value);
    } else {
        throw ValidationError("unknown sweep parameter: " + name);
    }
    validate(cfg);
}

std::vector<Trajectory> run_tracking(const SequenceBundle& bundle, const RunConfig& cfg) {
    validate(cfg);
    std::vector<Trajectory> all;
    int first_id = 1;
    for (const auto& [cls, frames] : bundle.by_class) {
        Tracker tracker(cfg.tracker, first_id);
        std::map<int, Trajectory> by_id;
        for (const auto& [frame, dets] : frames) {
            for (const TrackOutput& out : tracker.step(frame, dets)) {
                Trajectory& traj = by_id[out.id];
                traj.id = out.id;
                traj.entries.emplace_back(frame, out.box);
            }
        }
        first_id = tracker.next_id();
        for (auto& [id, traj] : by_id) {
            all.push_back(std::move(traj));
        }
    }
    std::sort(all.begin(), all.end(),
              [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });
    if (cfg.interpolate) {
        all = interpolate_all(all, cfg.interpolation_max_gap);
    }
    return all;
}

FrameLabels trajectories_to_labels(const std::vector<Trajectory>& trajectories) {
    FrameLabels labels;
    for (const Trajectory& traj : trajectories) {
        for (const auto& [frame, box] : traj.entries) {
            labels[frame].push_back({traj.id, box});
        }
    }
    return labels;
}

void track_files(const std::filesystem::path& dets_path,
                 const std::optional<std::filesystem::path>& embs_path, const RunConfig& cfg,
                 const std::filesystem::path& out_path) {
    const std::vector<DetectionRecord> records = parse_detections(dets_path);
    EmbeddingTable table;
    if (embs_path) {
        table = parse_embeddings(*embs_path, cfg.embedding_dim);
    }
    const SequenceBundle bundle = make_bundle(records, table, cfg.per_class);
    write_results(run_tracking(bundle, cfg), out_path);
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::ofstream gt(out_dir / "gt.txt");
    if (!gt) {
        throw std::runtime_error("cannot write " + (out_dir / "gt.txt").string());
    }
    char buf[512];
    for (const auto& [frame, boxes] : scenario.ground_truth) {
        for (const LabeledBox& lb : boxes) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,1.00,-1,-1,-1\n", frame,
                          lb.id, lb.box.x1, lb.box.y1, lb.box.width(), lb.box.height());
            gt << buf;
        }
    }

    std::ofstream det(out_dir / "det.txt");
    if (!det) {
        throw std::runtime_error("cannot write " + (out_dir / "det.txt").string());
    }
    const bool with_embeddings = !scenario.identity_vectors.empty();
    std::ofstream emb;
    if (with_embeddings) {
        emb.open(out_dir / "embed.txt");
        if (!emb) {
            throw std::runtime_error("cannot write " + (out_dir / "embed.txt").string());
        }
    }
    for (std::size_t f = 0; f < scenario.detections.size(); ++f) {
        const int frame = static_cast<int>(f) + 1;
        const auto& dets = scenario.detections[f];
        for (std::size_t i = 0; i < dets.size(); ++i) {
            const BBox& b = dets[i].box;
            std::snprintf(buf, sizeof(buf), "%d,-1,%.2f,%.2f,%.2f,%.2f,%.2f,-1,-1,-1\n", frame,
                          b.x1, b.y1, b.width(), b.height(), b.confidence);
            det << buf;
            if (with_embeddings && dets[i].embedding) {
                emb << frame << ',' << i;
                for (double v : *dets[i].embedding) {
                    std::snprintf(buf, sizeof(buf), ",%.17g", v);
                    emb << buf;
                }
                emb << '\n';
            }
        }
    }
}

std::string format_report_text(const MetricsReport& report) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "hota %.6f\n"
                  "deta %.6f\n"
                  "assa %.6f\n"
                  "mota %.6f\n"
                  "idf1 %.6f\n"
                  "id_switches %d\n"
                  "fragmentations %d\n"
                  "false_positives %d\n"
                  "false_negatives %d\n",
                  report.hota, report.deta, report.assa, report.mota, report.idf1,
                  report.id_switches, report.fragmentations, report.false_positives,
                  report.false_negatives);
    return buf;
}

std::string report_to_json(const MetricsReport& report) {
    json j;
    j["hota"] = report.hota;
    j["deta"] = report.deta;
    j["assa"] = report.assa;
    j["mota"] = report.mota;
    j["idf1"] = report.idf1;
    j["id_switches"] = report.id_switches;
    j["fragmentations"] = report.fragmentations;
    j["false_positives"] = report.false_positives;
    j["false_negatives"] = report.false_negatives;
    return j.dump(2) + "\n";
}

std::vector<SweepRow> run_sweep(const SequenceBundle& bundle, const FrameLabels& ground_truth,
                                const RunConfig& base, const std::string& param,
                                const std::vector<double>& values) {
    if (values.empty()) {
        throw ValidationError("sweep needs at least one value");
    }
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double value : values) {
        RunConfig cfg = base;
        apply_param(cfg, param, value);
        const std::vector<Trajectory> trajectories = run_tracking(bundle, cfg);
        LabeledFrameSet data;
        data.ground_truth = ground_truth;
        data.predictions = trajectories_to_labels(trajectories);
        rows.push_back({value, evaluate(data, cfg.eval_iou_threshold)});
    }
    return rows;
}

std::string format_sweep_table(const std::string& param, const std::vector<SweepRow>& rows) {
    std::string out = "# sweep param=" + param + "\n";
    out += "value hota deta assa mota idf1 idsw frag fp fn\n";
    char buf[512];
    for (const SweepRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.4f %.4f %.4f %.4f %.4f %.4f %d %d %d %d\n", row.value,
                      row.report.hota, row.report.deta, row.report.assa, row.report.mota,
                      row.report.idf1, row.report.id_switches, row.report.fragmentations,
                      row.report.false_positives, row.report.false_negatives);
        out += buf;
    }
    return out;
}

}  // namespace eioutrack
