#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <eioutrack/errors.hpp>
#include <eioutrack/mot_io.hpp>
#include <eioutrack/scenario.hpp>

namespace {

using namespace eioutrack;

// Tracker/config flags shared by track and sweep. Only flags the user passed
// override the config file; everything else keeps the file or default value.
struct ConfigFlags {
    std::string config_path;
    double high_thresh = 0.0;
    double low_thresh = 0.0;
    double tau_appearance = 0.0;
    double tau_eiou = 0.0;
    double e_initial = 0.0;
    double e_step = 0.0;
    int t_total = 0;
    double e_low = 0.0;
    double e_unconfirmed = 0.0;
    int max_lost = 0;
    double new_track_thresh = 0.0;
    double stage1_reject = 0.0;
    double stage2_reject = 0.0;
    double unconfirmed_reject = 0.0;
    double ema_alpha = 0.0;
    bool no_interpolation = false;
    int max_gap = 0;
    bool per_class = false;
    int embedding_dim = 0;

    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "JSON run config; flags override its values");
        const auto opt = [&](const char* name, auto& var, auto setter, const char* help) {
            CLI::Option* o = cmd.add_option(name, var, help);
            overrides.emplace_back(o, [&var, setter](RunConfig& cfg) { setter(cfg, var); });
        };
        opt("--high-thresh", high_thresh,
            [](RunConfig& c, double v) { c.tracker.high_thresh = v; },
            "high-score detection threshold");
        opt("--low-thresh", low_thresh,
            [](RunConfig& c, double v) { c.tracker.low_thresh = v; },
            "minimum detection confidence");
        opt("--tau-appearance", tau_appearance,
            [](RunConfig& c, double v) { c.tracker.tau_appearance = v; },
            "appearance cost gate");
        opt("--tau-eiou", tau_eiou, [](RunConfig& c, double v) { c.tracker.tau_eiou = v; },
            "expansion-IoU cost gate");
        opt("--e-initial", e_initial,
            [](RunConfig& c, double v) { c.tracker.schedule.e_initial = v; },
            "initial expansion scale");
        opt("--e-step", e_step, [](RunConfig& c, double v) { c.tracker.schedule.step = v; },
            "expansion scale increment per round");
        opt("--t-total", t_total, [](RunConfig& c, int v) { c.tracker.schedule.t_total = v; },
            "scale-up rounds for high-score association");
        opt("--e-low", e_low, [](RunConfig& c, double v) { c.tracker.e_low = v; },
            "expansion scale for low-score association");
        opt("--e-unconfirmed", e_unconfirmed,
            [](RunConfig& c, double v) { c.tracker.e_unconfirmed = v; },
            "expansion scale for unconfirmed-track association");
        opt("--max-lost", max_lost, [](RunConfig& c, int v) { c.tracker.max_lost = v; },
            "frames a lost track is kept");
        opt("--new-track-thresh", new_track_thresh,
            [](RunConfig& c, double v) { c.tracker.new_track_thresh = v; },
            "confidence needed to start a track");
        opt("--stage1-reject", stage1_reject,
            [](RunConfig& c, double v) { c.tracker.stage1_reject = v; },
            "max accepted stage-1 match cost");
        opt("--stage2-reject", stage2_reject,
            [](RunConfig& c, double v) { c.tracker.stage2_reject = v; },
            "max accepted stage-2 match cost");
        opt("--unconfirmed-reject", unconfirmed_reject,
            [](RunConfig& c, double v) { c.tracker.unconfirmed_reject = v; },
            "max accepted unconfirmed match cost");
        opt("--ema-alpha", ema_alpha, [](RunConfig& c, double v) { c.tracker.ema_alpha = v; },
            "track feature smoothing factor");
        opt("--max-gap", max_gap, [](RunConfig& c, int v) { c.interpolation_max_gap = v; },
            "largest gap filled by interpolation");
        opt("--embedding-dim", embedding_dim,
            [](RunConfig& c, int v) { c.embedding_dim = v; }, "expected embedding dimension");
        CLI::Option* no_interp =
            cmd.add_flag("--no-interpolation", no_interpolation, "skip gap interpolation");
        overrides.emplace_back(no_interp, [](RunConfig& c) { c.interpolate = false; });
        CLI::Option* pc = cmd.add_flag("--per-class", per_class,
                                       "track each detection class independently");
        overrides.emplace_back(pc, [](RunConfig& c) { c.per_class = true; });
    }

    RunConfig resolve() const {
        std::optional<std::filesystem::path> path;
        if (!config_path.empty()) {
            path = config_path;
        }
        RunConfig cfg = load_run_config(path);
        for (const auto& [option, apply] : overrides) {
            if (option->count() > 0) {
                apply(cfg);
            }
        }
        validate(cfg);
        return cfg;
    }
};

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            values.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw ValidationError("bad sweep value: '" + field + "'");
        }
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ExpansionIoU multi-object tracking over precomputed detections"};
    app.require_subcommand(1);

    // track
    auto* track = app.add_subcommand("track", "associate detections into tracks");
    std::string track_dets;
    std::string track_embs;
    std::string track_out = "results.txt";
    track->add_option("--dets", track_dets, "detection file")->required();
    track->add_option("--embs", track_embs, "embedding file");
    track->add_option("--out", track_out, "output result file");
    ConfigFlags track_flags;
    track_flags.add_to(*track);

    // eval
    auto* eval = app.add_subcommand("eval", "score a result file against ground truth");
    std::string eval_gt;
    std::string eval_res;
    std::string eval_json;
    double eval_iou = 0.5;
    eval->add_option("--gt", eval_gt, "ground-truth file")->required();
    eval->add_option("--res", eval_res, "result file")->required();
    eval->add_option("--iou-thresh", eval_iou, "matching IoU threshold");
    eval->add_option("--json", eval_json, "also write the report as JSON here");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark sequence");
    std::string synth_scenario;
    std::string synth_out_dir;
    std::uint64_t synth_seed = 0;
    synth->add_option("--scenario", synth_scenario, "scenario JSON config")->required();
    synth->add_option("--out-dir", synth_out_dir, "output directory")->required();
    CLI::Option* seed_opt = synth->add_option("--seed", synth_seed, "seed override");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "rerun tracking over a parameter grid");
    std::string sweep_dets;
    std::string sweep_embs;
    std::string sweep_gt;
    std::string sweep_param;
    std::string sweep_values;
    sweep->add_option("--dets", sweep_dets, "detection file")->required();
    sweep->add_option("--embs", sweep_embs, "embedding file");
    sweep->add_option("--gt", sweep_gt, "ground-truth file")->required();
    sweep->add_option("--param", sweep_param, "config key to sweep")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    ConfigFlags sweep_flags;
    sweep_flags.add_to(*sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (track->parsed()) {
            const RunConfig cfg = track_flags.resolve();
            std::optional<std::filesystem::path> embs;
            if (!track_embs.empty()) {
                embs = track_embs;
            }
            track_files(track_dets, embs, cfg, track_out);
        } else if (eval->parsed()) {
            LabeledFrameSet data;
            data.ground_truth = parse_ground_truth(eval_gt);
            data.predictions = parse_ground_truth(eval_res);
            if (!(eval_iou > 0.0 && eval_iou < 1.0)) {
                throw ValidationError("invalid run config: eval_iou_threshold");
            }
            const MetricsReport report = evaluate(data, eval_iou);
            std::cout << format_report_text(report);
            if (!eval_json.empty()) {
                std::ofstream out(eval_json);
                if (!out) {
                    throw std::runtime_error("cannot write " + eval_json);
                }
                out << report_to_json(report);
            }
        } else if (synth->parsed()) {
            ScenarioConfig cfg = load_scenario_config(synth_scenario);
            if (seed_opt->count() > 0) {
                cfg.seed = synth_seed;
            }
            write_scenario(generate(cfg), synth_out_dir);
        } else if (sweep->parsed()) {
            const RunConfig cfg = sweep_flags.resolve();
            const std::vector<DetectionRecord> records = parse_detections(sweep_dets);
            EmbeddingTable table;
            if (!sweep_embs.empty()) {
                table = parse_embeddings(sweep_embs, cfg.embedding_dim);
            }
            const SequenceBundle bundle = make_bundle(records, table, cfg.per_class);
            const FrameLabels gt = parse_ground_truth(sweep_gt);
            const std::vector<SweepRow> rows =
                run_sweep(bundle, gt, cfg, sweep_param, parse_values(sweep_values));
            std::cout << format_sweep_table(sweep_param, rows);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
