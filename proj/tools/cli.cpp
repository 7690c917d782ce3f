#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "footfall/ann.hpp"
#include "footfall/dataset.hpp"
#include "footfall/features.hpp"
#include "footfall/filter.hpp"
#include "footfall/metrics.hpp"
#include "footfall/model_io.hpp"
#include "footfall/shapley.hpp"
#include "footfall/signal_io.hpp"
#include "footfall/svm.hpp"
#include "footfall/synth.hpp"

namespace footfall::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::int64_t seed_override = -1;

    PipelineConfig load_config() const {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = PipelineConfig::load(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        cfg.validate();
        return cfg;
    }

    fs::path out(const std::string& name) const {
        fs::create_directories(out_dir);
        return fs::path(out_dir) / name;
    }
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

ReferencePattern resolve_reference(const PipelineConfig& cfg) {
    const std::size_t len = static_cast<std::size_t>(cfg.detector.effective_event_len());
    if (cfg.reference_pattern.empty())
        return canonical_reference(static_cast<int>(len), cfg.sample_rate_hz);
    return load_reference_pattern(cfg.reference_pattern, len);
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        try {
            grid.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad grid value '" + tok + "'");
        }
    }
    if (grid.empty()) throw ConfigError("empty threshold grid");
    return grid;
}

// ---------------------------------------------------------------------------
// filter
// ---------------------------------------------------------------------------

int cmd_filter(const GlobalOptions& g, const std::string& input, std::string output) {
    PipelineConfig cfg = g.load_config();
    Signal sig = load_signal(input, signal_format_from_path(input), cfg.sample_rate_hz);
    if (cfg.lowpass.enabled) sig = butterworth_filter(sig, cfg.lowpass_spec());
    if (cfg.bandstop.enabled) sig = butterworth_filter(sig, cfg.bandstop_spec());
    if (output.empty()) output = (g.out(fs::path(input).stem().string() + "_filtered.csv")).string();
    write_signal_csv(sig, output);
    std::cout << "filtered " << sig.size() << " samples -> " << output << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

int cmd_detect(const GlobalOptions& g, const std::string& input) {
    PipelineConfig cfg = g.load_config();
    Signal sig = load_signal(input, signal_format_from_path(input), cfg.sample_rate_hz);

    auto t0 = clock_type::now();
    RatioSeries rs = compute_ratio(sig, cfg.detector);
    const double ratio_ms = ms_since(t0);

    auto segments = threshold_segments(rs, cfg.detector);
    auto gated = gate_by_length(segments, cfg.detector);

    t0 = clock_type::now();
    std::vector<EventRecord> events;
    std::size_t skipped = 0;
    for (const auto& seg : gated) {
        try {
            ExtractedEvent ev = extract_event(sig, seg, cfg.detector);
            events.push_back({seg, ev.poi, std::move(ev.samples)});
        } catch (const BoundaryError&) {
            ++skipped;
        }
    }
    const double extract_ms = ms_since(t0);

    const fs::path events_path = g.out("events.csv");
    write_events_csv(events, events_path);

    json report;
    report["input"] = input;
    report["samples"] = sig.size();
    report["sample_rate_hz"] = sig.sample_rate_hz;
    report["method"] = std::string(to_string(cfg.detector.method));
    report["threshold"] = cfg.detector.threshold;
    report["stage_counts"] = {{"segments", segments.size()},
                              {"gated", gated.size()},
                              {"extracted", events.size()}};
    report["skipped_boundary"] = skipped;
    report["timings_ms"] = {{"ratio", ratio_ms}, {"extraction", extract_ms}};
    write_text(g.out("detect_report.json"), report.dump(2) + "\n");

    std::cout << "segments=" << segments.size() << " gated=" << gated.size()
              << " extracted=" << events.size() << " -> " << events_path.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// featurize
// ---------------------------------------------------------------------------

int cmd_featurize(const GlobalOptions& g, const std::string& events_path, int label,
                  const std::string& ref_override, const std::string& output) {
    PipelineConfig cfg = g.load_config();
    if (!ref_override.empty()) {
        PipelineConfig patched = cfg;
        patched.reference_pattern = ref_override;
        patched.validate();
        cfg = patched;
    }
    ReferencePattern ref = resolve_reference(cfg);
    auto events = read_events_csv(events_path);

    Dataset ds;
    std::size_t rejected = 0;
    for (const auto& ev : events) {
        ExtractedEvent e{ev.samples, ev.poi, ev.segment};
        DataRow row;
        try {
            row.features = feature_row(extract_features(e, ev.segment, ref, cfg.sample_rate_hz));
        } catch (const DegenerateInputError&) {
            ++rejected;
            continue;
        }
        row.label = label;
        ds.rows.push_back(std::move(row));
    }
    if (ds.rows.empty()) throw DegenerateInputError("no events survived feature extraction");

    const fs::path out = output.empty() ? g.out("features.csv") : fs::path(output);
    save_feature_csv(ds, out);
    std::cout << "featurized " << ds.rows.size() << " events (" << rejected
              << " rejected) -> " << out.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// train / eval
// ---------------------------------------------------------------------------

int cmd_train(const GlobalOptions& g, const std::string& features_path, long undersample_to) {
    PipelineConfig cfg = g.load_config();
    Dataset ds = load_feature_csv(features_path);
    ds.validate(); // labels must be +/-1 for training
    if (undersample_to > 0)
        ds = undersample(ds, static_cast<std::size_t>(undersample_to), cfg.seed);

    Trainer trainer = make_trainer(cfg.classifier, cfg.seed);
    CvResult cv = kfold_cv(ds, cfg.classifier.folds, trainer, cfg.seed);

    // final model on the full training set
    Dataset standardized = standardize(ds);
    json report;
    report["cv_accuracy"] = cv.cv_accuracy;
    report["fold_accuracies"] = cv.fold_accuracies;
    report["rows"] = ds.rows.size();
    report["classifier"] = cfg.classifier.type;

    const fs::path model_path = g.out("model.json");
    std::vector<int> predicted, truth;
    if (cfg.classifier.type == "svm") {
        SvmTrainOptions opts;
        opts.kernel.type = kernel_type_from_string(cfg.classifier.kernel);
        opts.kernel.gamma = cfg.classifier.gamma;
        opts.kernel.coef0 = cfg.classifier.coef0;
        opts.c = cfg.classifier.c;
        opts.tolerance = cfg.classifier.tolerance;
        opts.max_steps = cfg.classifier.max_steps;
        SvmModel model = train_svm(standardized, opts);
        save_model(model, model_path);
        report["kernel"] = cfg.classifier.kernel;
        report["support_vectors"] = model.support_vectors.size();
        for (const auto& r : ds.rows) {
            predicted.push_back(model.predict_label(r.features));
            truth.push_back(r.label);
        }
    } else {
        AnnConfig ann_cfg = AnnConfig::reference();
        ann_cfg.layer_sizes.front() = static_cast<int>(ds.dim());
        ann_cfg.epochs = cfg.classifier.epochs;
        ann_cfg.batch_size = cfg.classifier.batch_size;
        ann_cfg.learning_rate = cfg.classifier.learning_rate;
        AnnModel model = train_ann(standardized, ann_cfg, cfg.seed);
        save_model(model, model_path);
        report["epochs"] = cfg.classifier.epochs;
        report["final_loss"] = model.epoch_losses.back();
        for (const auto& r : ds.rows) {
            predicted.push_back(model.predict_label(r.features));
            truth.push_back(r.label);
        }
    }
    report["train_accuracy"] = evaluate(predicted, truth).accuracy;
    write_text(g.out("train_report.json"), report.dump(2) + "\n");

    std::cout << "cv_accuracy=" << cv.cv_accuracy << " model -> " << model_path.string() << "\n";
    return kOk;
}

int cmd_eval(const GlobalOptions& g, const std::string& model_path,
             const std::string& features_path, std::string case_name) {
    g.load_config(); // validates config when one is given
    AnyModel model = load_model(model_path);
    Dataset ds = load_feature_csv(features_path);
    ds.validate();

    auto label_fn = make_label_fn(model);
    std::vector<int> predicted, truth;
    for (const auto& r : ds.rows) {
        predicted.push_back(label_fn(r.features));
        truth.push_back(r.label);
    }
    Metrics m = evaluate(predicted, truth);
    if (case_name.empty()) case_name = fs::path(features_path).stem().string();
    const std::string text = m.to_json(case_name);
    write_text(g.out("metrics_" + case_name + ".json"), text);
    std::cout << text;
    return kOk;
}

// ---------------------------------------------------------------------------
// explain
// ---------------------------------------------------------------------------

int cmd_explain(const GlobalOptions& g, const std::string& model_path,
                const std::string& features_path, long limit) {
    g.load_config();
    AnyModel model = load_model(model_path);
    Dataset ds = load_feature_csv(features_path);
    ds.validate(/*require_labels=*/false);
    if (ds.dim() != model_scaler(model).mean.size())
        throw ShapeError("model and feature dimensions disagree");

    ScoreFn score = make_score_fn(model);
    // interventional background: the training-set feature means carried by
    // the model scaler
    const std::vector<double> background = model_scaler(model).mean;

    const std::size_t n = limit > 0 ? std::min<std::size_t>(limit, ds.rows.size())
                                    : ds.rows.size();
    std::vector<ShapExplanation> explanations;
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        ShapExplanation ex = exact_shapley(score, background, ds.rows[i].features);
        json jr;
        jr["base_value"] = ex.base_value;
        jr["model_output"] = ex.model_output;
        json phi = json::object();
        for (std::size_t f = 0; f < kFeatureCount; ++f)
            phi[std::string(kFeatureNames[f])] = ex.phi[f];
        jr["phi"] = phi;
        rows.push_back(std::move(jr));
        explanations.push_back(std::move(ex));
    }

    ImpactSummary summary = impact_summary(explanations);
    std::vector<std::string> names;
    for (auto nv : kFeatureNames) names.emplace_back(nv);

    write_text(g.out("explanations.json"), json{{"explanations", rows}}.dump(2) + "\n");
    write_text(g.out("impact_summary.csv"), summary.to_csv(names));

    std::cout << "explained " << n << " rows; top features:";
    for (std::size_t k = 0; k < std::min<std::size_t>(3, summary.ranking.size()); ++k)
        std::cout << ' ' << names[summary.ranking[k]];
    std::cout << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// bench / calibrate / synth
// ---------------------------------------------------------------------------

// reseed regenerates a synthetic scene with a sibling seed (fresh pulse
// phases and noise); recorded signal+truth inputs are returned as-is.
std::pair<Signal, GroundTruth> load_or_generate_scene(const PipelineConfig& cfg,
                                                      const std::string& spec_path,
                                                      const std::string& signal_path,
                                                      const std::string& truth_path,
                                                      bool use_default, std::uint64_t seed,
                                                      bool reseed = false) {
    if (use_default) return gen_scene(default_scene_spec(seed));
    if (!spec_path.empty()) {
        SceneSpec spec = load_scene_spec(spec_path);
        if (reseed) spec.seed = seed;
        return gen_scene(spec);
    }
    if (signal_path.empty() || truth_path.empty())
        throw ConfigError("provide --spec, --default-scene, or both --signal and --truth");
    Signal sig = load_signal(signal_path, signal_format_from_path(signal_path),
                             cfg.sample_rate_hz);
    return {std::move(sig), load_ground_truth(truth_path)};
}

int cmd_bench(const GlobalOptions& g, const std::string& spec_path,
              const std::string& signal_path, const std::string& truth_path, bool use_default,
              const std::string& grid_csv, int timing_reps) {
    PipelineConfig cfg = g.load_config();
    auto [sig, truth] = load_or_generate_scene(cfg, spec_path, signal_path, truth_path,
                                               use_default || (spec_path.empty() &&
                                                               signal_path.empty()),
                                               cfg.seed);

    // calibration scene: same shape, sibling seed (same recording when the
    // scene cannot be regenerated)
    auto [calib_sig, calib_truth] =
        load_or_generate_scene(cfg, spec_path, signal_path, truth_path,
                               use_default || (spec_path.empty() && signal_path.empty()),
                               cfg.seed + 1, /*reseed=*/true);

    const std::vector<double> grid = parse_grid(grid_csv);
    std::vector<DetectorConfig> configs;
    for (DetectorMethod m :
         {DetectorMethod::sta_lta, DetectorMethod::mer, DetectorMethod::ccw}) {
        DetectorConfig dc = DetectorConfig::defaults_for(m);
        dc.event_len = cfg.detector.event_len;
        dc.min_len = cfg.detector.min_len;
        dc.max_len = cfg.detector.max_len;
        dc.epsilon = cfg.detector.epsilon;
        dc.threshold = calibrate_threshold(dc, {{calib_sig, calib_truth}}, grid);
        configs.push_back(dc);
    }

    BenchReport report = run_detector_benchmark(sig, truth.centers(), configs, timing_reps);
    write_text(g.out("bench_report.json"), report.to_json());
    write_text(g.out("bench_report.csv"), report.to_csv());
    std::cout << report.to_csv();
    return kOk;
}

int cmd_calibrate(const GlobalOptions& g, const std::string& method_name,
                  const std::string& grid_csv, const std::string& spec_path,
                  const std::string& signal_path, const std::string& truth_path,
                  bool use_default) {
    PipelineConfig cfg = g.load_config();
    DetectorConfig dc = DetectorConfig::defaults_for(detector_method_from_string(method_name));
    dc.event_len = cfg.detector.event_len;
    dc.min_len = cfg.detector.min_len;
    dc.max_len = cfg.detector.max_len;
    dc.epsilon = cfg.detector.epsilon;

    auto scene = load_or_generate_scene(cfg, spec_path, signal_path, truth_path,
                                        use_default || (spec_path.empty() &&
                                                        signal_path.empty()),
                                        cfg.seed);
    double threshold = calibrate_threshold(dc, {scene}, parse_grid(grid_csv));

    json j{{"method", method_name}, {"threshold", threshold}};
    write_text(g.out("calibration.json"), j.dump(2) + "\n");
    std::cout << j.dump() << "\n";
    return kOk;
}

int cmd_synth(const GlobalOptions& g, const std::string& spec_path, bool use_default,
              const std::string& classes_path, bool use_default_classes, long n_per_class,
              bool also_wav, double noise_rel) {
    PipelineConfig cfg = g.load_config();

    if (n_per_class > 0) {
        std::vector<ClassSpec> classes = use_default_classes || classes_path.empty()
                                             ? default_class_specs()
                                             : load_class_specs(classes_path);
        DatasetGenOptions options;
        options.noise_sigma_rel = noise_rel;
        Dataset ds = gen_labeled_dataset(static_cast<int>(n_per_class), classes,
                                         cfg.sample_rate_hz, cfg.seed, options);
        const fs::path out = g.out("features.csv");
        save_feature_csv(ds, out);
        std::cout << "generated " << ds.rows.size() << " labeled rows -> " << out.string() << "\n";
        return kOk;
    }

    SceneSpec spec = use_default || spec_path.empty() ? default_scene_spec(cfg.seed)
                                                      : load_scene_spec(spec_path);
    auto [sig, truth] = gen_scene(spec);
    const fs::path sig_path = g.out("scene.csv");
    write_signal_csv(sig, sig_path);
    if (also_wav) write_signal_wav16(sig, g.out("scene.wav"));
    save_ground_truth(truth, g.out("truth.json"));
    write_text(g.out("scene_spec.json"), scene_spec_to_json(spec));
    std::cout << "scene with " << truth.events.size() << " events -> " << sig_path.string() << "\n";
    return kOk;
}

} // namespace

// ---------------------------------------------------------------------------
// events CSV
// ---------------------------------------------------------------------------

void write_events_csv(const std::vector<EventRecord>& events, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    const std::size_t len = events.empty() ? 0 : events.front().samples.size();
    out << "segment_start,segment_end,poi";
    for (std::size_t i = 0; i < len; ++i) out << ",s" << i;
    out << '\n';
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& ev : events) {
        if (ev.samples.size() != len)
            throw ShapeError("event records differ in length");
        out << ev.segment.start_index << ',' << ev.segment.end_index << ',' << ev.poi;
        for (double v : ev.samples) out << ',' << v;
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<EventRecord> read_events_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");

    std::vector<EventRecord> events;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        std::string field;
        EventRecord ev;
        try {
            std::getline(ls, field, ',');
            ev.segment.start_index = std::stoull(field);
            std::getline(ls, field, ',');
            ev.segment.end_index = std::stoull(field);
            std::getline(ls, field, ',');
            ev.poi = std::stoull(field);
            while (std::getline(ls, field, ',')) ev.samples.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw ParseError(path.string() + ": row " + std::to_string(row) +
                             ": malformed event record");
        }
        if (ev.samples.empty())
            throw ParseError(path.string() + ": row " + std::to_string(row) + ": no samples");
        events.push_back(std::move(ev));
    }
    return events;
}

Trainer make_trainer(const ClassifierConfig& cc, std::uint64_t seed) {
    if (cc.type == "svm") {
        SvmTrainOptions opts;
        opts.kernel.type = kernel_type_from_string(cc.kernel);
        opts.kernel.gamma = cc.gamma;
        opts.kernel.coef0 = cc.coef0;
        opts.c = cc.c;
        opts.tolerance = cc.tolerance;
        opts.max_steps = cc.max_steps;
        return [opts](const Dataset& raw) -> Predictor {
            SvmModel model = train_svm(standardize(raw), opts);
            return [model](const std::vector<double>& x) { return model.predict_label(x); };
        };
    }
    if (cc.type == "ann") {
        AnnConfig base = AnnConfig::reference();
        base.epochs = cc.epochs;
        base.batch_size = cc.batch_size;
        base.learning_rate = cc.learning_rate;
        return [base, seed](const Dataset& raw) -> Predictor {
            AnnConfig cfg = base;
            cfg.layer_sizes.front() = static_cast<int>(raw.dim());
            AnnModel model = train_ann(standardize(raw), cfg, seed);
            return [model](const std::vector<double>& x) { return model.predict_label(x); };
        };
    }
    throw ConfigError("classifier.type must be 'svm' or 'ann'");
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Seismic footfall detection, classification and attribution pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "Pipeline config JSON")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed_override, "Override the config seed");
    app.add_option("--out", g.out_dir, "Output directory (created if missing)");

    // filter
    std::string in_path, out_path;
    auto* filter_cmd = app.add_subcommand("filter", "Apply the configured IIR filters");
    filter_cmd->fallthrough();
    filter_cmd->add_option("--in", in_path, "Input signal (.csv/.wav)")->required();
    filter_cmd->add_option("--out-file", out_path, "Output CSV path");

    // detect
    std::string detect_in;
    auto* detect_cmd = app.add_subcommand("detect", "Detect and extract events");
    detect_cmd->fallthrough();
    detect_cmd->add_option("--in", detect_in, "Input signal (.csv/.wav)")->required();

    // featurize
    std::string events_in, ref_path, features_out;
    int label = 0;
    auto* feat_cmd = app.add_subcommand("featurize", "Compute feature vectors for events");
    feat_cmd->fallthrough();
    feat_cmd->add_option("--events", events_in, "events.csv from detect")->required();
    feat_cmd->add_option("--label", label, "Class label for every row (+1/-1, 0 = unlabeled)");
    feat_cmd->add_option("--ref", ref_path, "Reference pattern CSV");
    feat_cmd->add_option("--out-file", features_out, "Output features CSV");

    // train
    std::string train_features;
    long undersample_to = 0;
    auto* train_cmd = app.add_subcommand("train", "Cross-validate and train the classifier");
    train_cmd->fallthrough();
    train_cmd->add_option("--features", train_features, "Training features CSV")->required();
    train_cmd->add_option("--undersample-to", undersample_to,
                          "Undersample the majority class to this count first");

    // eval
    std::string eval_model, eval_features, case_name;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trained model");
    eval_cmd->fallthrough();
    eval_cmd->add_option("--model", eval_model, "Model JSON")->required();
    eval_cmd->add_option("--features", eval_features, "Labeled features CSV")->required();
    eval_cmd->add_option("--case", case_name, "Report case name");

    // explain
    std::string explain_model, explain_features;
    long explain_limit = 0;
    auto* explain_cmd = app.add_subcommand("explain", "Shapley attributions for predictions");
    explain_cmd->fallthrough();
    explain_cmd->add_option("--model", explain_model, "Model JSON")->required();
    explain_cmd->add_option("--features", explain_features, "Features CSV")->required();
    explain_cmd->add_option("--limit", explain_limit, "Explain only the first N rows");

    // bench
    std::string bench_spec, bench_signal, bench_truth;
    std::string bench_grid = "0.5,0.75,1,1.5,2,3,4.5,7,10,15,22,33,50";
    bool bench_default = false;
    int timing_reps = 20;
    auto* bench_cmd = app.add_subcommand("bench", "Compare the three detectors on one scene");
    bench_cmd->fallthrough();
    bench_cmd->add_option("--spec", bench_spec, "Scene spec JSON (generated)");
    bench_cmd->add_flag("--default-scene", bench_default, "Use the built-in 5.2 s scene");
    bench_cmd->add_option("--signal", bench_signal, "Recorded scene signal");
    bench_cmd->add_option("--truth", bench_truth, "Ground truth JSON for --signal");
    bench_cmd->add_option("--grid", bench_grid, "Calibration threshold grid");
    bench_cmd->add_option("--reps", timing_reps, "Timing repetitions");

    // synth
    std::string synth_spec, synth_classes;
    bool synth_default = false, synth_default_classes = false, synth_wav = false;
    long n_per_class = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Generate scenes or labeled datasets");
    synth_cmd->fallthrough();
    synth_cmd->add_option("--spec", synth_spec, "Scene spec JSON");
    synth_cmd->add_flag("--default-scene", synth_default, "Use the built-in 5.2 s scene");
    synth_cmd->add_flag("--wav", synth_wav, "Also write a 16-bit WAV");
    synth_cmd->add_option("--classes", synth_classes, "Class spec JSON for dataset mode");
    synth_cmd->add_flag("--default-classes", synth_default_classes,
                        "Use the built-in elephant/confuser classes");
    synth_cmd->add_option("--n-per-class", n_per_class, "Dataset mode: rows per class");
    double synth_noise_rel = 0.02;
    synth_cmd->add_option("--noise-rel", synth_noise_rel,
                          "Dataset mode: noise sigma relative to the pulse amplitude");

    // calibrate
    std::string cal_method = "sta_lta", cal_grid = "0.5,0.75,1,1.5,2,3,4.5,7,10,15,22,33,50";
    std::string cal_spec, cal_signal, cal_truth;
    bool cal_default = false;
    auto* cal_cmd = app.add_subcommand("calibrate", "Pick a detector threshold by F1");
    cal_cmd->fallthrough();
    cal_cmd->add_option("--method", cal_method, "sta_lta | mer | ccw");
    cal_cmd->add_option("--grid", cal_grid, "Comma-separated thresholds");
    cal_cmd->add_option("--spec", cal_spec, "Scene spec JSON");
    cal_cmd->add_flag("--default-scene", cal_default, "Use the built-in 5.2 s scene");
    cal_cmd->add_option("--signal", cal_signal, "Recorded scene signal");
    cal_cmd->add_option("--truth", cal_truth, "Ground truth JSON for --signal");

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    storage.insert(storage.begin(), "footfall");
    argv.reserve(storage.size());
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (filter_cmd->parsed()) return cmd_filter(g, in_path, out_path);
        if (detect_cmd->parsed()) return cmd_detect(g, detect_in);
        if (feat_cmd->parsed())
            return cmd_featurize(g, events_in, label, ref_path, features_out);
        if (train_cmd->parsed()) return cmd_train(g, train_features, undersample_to);
        if (eval_cmd->parsed()) return cmd_eval(g, eval_model, eval_features, case_name);
        if (explain_cmd->parsed())
            return cmd_explain(g, explain_model, explain_features, explain_limit);
        if (bench_cmd->parsed())
            return cmd_bench(g, bench_spec, bench_signal, bench_truth, bench_default,
                             bench_grid, timing_reps);
        if (synth_cmd->parsed())
            return cmd_synth(g, synth_spec, synth_default, synth_classes,
                             synth_default_classes, n_per_class, synth_wav,
                             synth_noise_rel);
        if (cal_cmd->parsed())
            return cmd_calibrate(g, cal_method, cal_grid, cal_spec, cal_signal, cal_truth,
                                 cal_default);
        std::cerr << "error: no subcommand given\n";
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ShapeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kIoError;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumericError;
    }
}

} // namespace footfall::cli
