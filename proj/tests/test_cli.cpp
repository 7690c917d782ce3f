#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "cli.hpp"
#include "footfall/dataset.hpp"
#include "footfall/signal_io.hpp"
#include "footfall/spectrum.hpp"
#include "footfall/synth.hpp"
#include "test_util.hpp"

using namespace footfall;
using footfall::cli::run_cli;

namespace {

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return nlohmann::json::parse(in);
}

} // namespace

TEST_CASE("config round trip makes defaults explicit") {
    cli::PipelineConfig cfg;
    const std::string once = cfg.to_json();
    cli::PipelineConfig back = cli::PipelineConfig::from_json(once);
    CHECK(back.to_json() == once);

    // a sparse config resolves to the same explicit form
    cli::PipelineConfig sparse = cli::PipelineConfig::from_json("{}");
    CHECK(sparse.to_json() == once);

    cli::PipelineConfig tweaked = cli::PipelineConfig::from_json(
        R"({"detector": {"method": "ccw", "threshold": 0.4}})");
    CHECK(tweaked.detector.method == DetectorMethod::ccw);
    CHECK(tweaked.detector.threshold == 0.4);
    CHECK(tweaked.sample_rate_hz == 880.0);
}

TEST_CASE("config validation names the failing field") {
    cli::PipelineConfig cfg;
    cfg.classifier.folds = 1;
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("folds") != std::string::npos);
    }
}

TEST_CASE("exit codes: missing input, bad config, silence") {
    testutil::TempDir tmp("cli_codes");

    // missing input path names the file and exits 3
    CHECK(run_cli({"--out", tmp.file("o1"), "detect", "--in", tmp.file("nope.csv")}) ==
          cli::kIoError);

    // invalid config exits 2
    {
        std::ofstream bad(tmp.file("bad.json"));
        bad << R"({"classifier": {"folds": 1}})";
    }
    CHECK(run_cli({"--config", tmp.file("bad.json"), "--out", tmp.file("o2"), "detect",
                   "--in", tmp.file("nope.csv")}) == cli::kConfigError);

    // unknown flags exit 2
    CHECK(run_cli({"detect", "--nonsense"}) == cli::kConfigError);

    // all-silence input: success with zero events
    Signal silence{std::vector<double>(8000, 0.0), 880.0};
    write_signal_csv(silence, tmp.file("quiet.csv"));
    CHECK(run_cli({"--out", tmp.file("o3"), "detect", "--in", tmp.file("quiet.csv")}) ==
          cli::kOk);
    auto report = read_json_file(tmp.file("o3") + "/detect_report.json");
    CHECK(report["stage_counts"]["extracted"] == 0);
}

TEST_CASE("detect on the default scene finds all ten events") {
    testutil::TempDir tmp("cli_detect");
    CHECK(run_cli({"--out", tmp.path.string(), "--seed", "42", "synth", "--default-scene"}) ==
          cli::kOk);

    CHECK(run_cli({"--out", tmp.path.string(), "--seed", "42", "calibrate", "--method",
                   "sta_lta", "--default-scene"}) == cli::kOk);
    auto cal = read_json_file(tmp.file("calibration.json"));
    const double threshold = cal["threshold"];

    cli::PipelineConfig cfg;
    cfg.detector.threshold = threshold;
    cfg.save(tmp.file("config.json"));

    CHECK(run_cli({"--config", tmp.file("config.json"), "--out", tmp.path.string(), "detect",
                   "--in", tmp.file("scene.csv")}) == cli::kOk);
    auto report = read_json_file(tmp.file("detect_report.json"));
    CHECK(report["stage_counts"]["extracted"] == 10);
    CHECK(report["stage_counts"]["segments"] >= report["stage_counts"]["gated"]);
    CHECK(report["timings_ms"]["ratio"].get<double>() > 0.0);

    // counts non-increasing through the stages
    CHECK(report["stage_counts"]["gated"] >= report["stage_counts"]["extracted"]);
}

TEST_CASE("featurize, train, eval and explain chain together") {
    testutil::TempDir tmp("cli_chain");

    // labeled dataset straight from the generator
    CHECK(run_cli({"--out", tmp.path.string(), "--seed", "7", "synth", "--default-classes",
                   "--n-per-class", "60"}) == cli::kOk);
    Dataset ds = load_feature_csv(tmp.file("features.csv"));
    CHECK(ds.rows.size() == 120);

    CHECK(run_cli({"--out", tmp.path.string(), "--seed", "7", "train", "--features",
                   tmp.file("features.csv")}) == cli::kOk);
    auto train_report = read_json_file(tmp.file("train_report.json"));
    CHECK(train_report["cv_accuracy"].get<double>() >= 0.9);

    CHECK(run_cli({"--out", tmp.path.string(), "eval", "--model", tmp.file("model.json"),
                   "--features", tmp.file("features.csv"), "--case", "train_set"}) == cli::kOk);
    auto metrics = read_json_file(tmp.file("metrics_train_set.json"));
    CHECK(metrics["accuracy"].get<double>() >= train_report["cv_accuracy"].get<double>() - 1e-9);
    CHECK(metrics["case_name"] == "train_set");

    CHECK(run_cli({"--out", tmp.path.string(), "explain", "--model", tmp.file("model.json"),
                   "--features", tmp.file("features.csv"), "--limit", "10"}) == cli::kOk);
    auto expl = read_json_file(tmp.file("explanations.json"));
    REQUIRE(expl["explanations"].size() == 10);
    for (const auto& e : expl["explanations"]) {
        double sum = e["base_value"].get<double>();
        for (const auto& [k, v] : e["phi"].items()) sum += v.get<double>();
        CHECK(sum == doctest::Approx(e["model_output"].get<double>()).epsilon(1e-6));
    }
    std::ifstream summary(tmp.file("impact_summary.csv"));
    std::string header;
    std::getline(summary, header);
    CHECK(header == "feature,mean_abs_phi");
}

TEST_CASE("filter subcommand writes a filtered csv") {
    testutil::TempDir tmp("cli_filter");
    SceneSpec spec = default_scene_spec(3);
    spec.tone_amplitude = 0.5;
    auto [sig, truth] = gen_scene(spec);
    write_signal_csv(sig, tmp.file("in.csv"));

    CHECK(run_cli({"--out", tmp.path.string(), "filter", "--in", tmp.file("in.csv"),
                   "--out-file", tmp.file("out.csv")}) == cli::kOk);
    Signal filtered = load_signal(tmp.file("out.csv"), SignalFormat::csv, 880.0);
    CHECK(filtered.size() == sig.size());

    // the 55 Hz tone is attenuated by the band-stop
    PowerSpectrum before = power_spectrum(sig);
    PowerSpectrum after = power_spectrum(filtered);
    CHECK(after.band_power(53.0, 57.0) < 1e-4 * before.band_power(53.0, 57.0));
}

TEST_CASE("bench emits the comparison table") {
    testutil::TempDir tmp("cli_bench");
    CHECK(run_cli({"--out", tmp.path.string(), "--seed", "5", "bench", "--default-scene",
                   "--reps", "5"}) == cli::kOk);
    auto report = read_json_file(tmp.file("bench_report.json"));
    REQUIRE(report["results"].size() == 3);
    for (const auto& r : report["results"])
        CHECK(r["exec_time_ms"].get<double>() > 0.0);

    std::ifstream csv(tmp.file("bench_report.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "method,detected,missed,merged,exec_time_ms");
}

TEST_CASE("train rejects single-class and unlabeled data") {
    testutil::TempDir tmp("cli_train_bad");
    Dataset ds;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        DataRow r;
        for (int j = 0; j < 9; ++j) r.features.push_back(g(rng));
        r.label = +1;
        ds.rows.push_back(r);
    }
    save_feature_csv(ds, tmp.file("single.csv"));
    CHECK(run_cli({"--out", tmp.path.string(), "train", "--features",
                   tmp.file("single.csv")}) == cli::kConfigError);

    for (auto& r : ds.rows) r.label = 0;
    save_feature_csv(ds, tmp.file("unlabeled.csv"));
    CHECK(run_cli({"--out", tmp.path.string(), "train", "--features",
                   tmp.file("unlabeled.csv")}) == cli::kConfigError);
}

TEST_CASE("events csv round trip") {
    testutil::TempDir tmp("cli_events");
    std::vector<cli::EventRecord> events;
    for (int i = 0; i < 3; ++i) {
        cli::EventRecord ev;
        ev.segment = {static_cast<std::size_t>(100 * i), static_cast<std::size_t>(100 * i + 80),
                      DetectorMethod::sta_lta};
        ev.poi = 100 * i + 40;
        ev.samples = testutil::random_samples(191, 40 + i);
        events.push_back(std::move(ev));
    }
    cli::write_events_csv(events, tmp.file("ev.csv"));
    auto back = cli::read_events_csv(tmp.file("ev.csv"));
    REQUIRE(back.size() == 3);
    CHECK(back[1].poi == 140);
    CHECK(back[2].samples == events[2].samples);
}
