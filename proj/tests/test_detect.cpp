#include <doctest.h>

#include <cmath>

#include "footfall/detect.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace footfall;

namespace {

DetectorConfig small_cfg(DetectorMethod m) {
    DetectorConfig cfg = DetectorConfig::defaults_for(m);
    cfg.short_len = 16;
    cfg.long_len = 80;
    cfg.window_len = 32;
    return cfg;
}

RatioSeries from_values(std::vector<double> v) {
    RatioSeries rs;
    rs.first_valid = 0;
    rs.last_valid = v.empty() ? 0 : v.size() - 1;
    rs.values = std::move(v);
    return rs;
}

} // namespace

TEST_CASE("constant signal fixed points") {
    const double c = 2.5;
    Signal sig{std::vector<double>(600, c), 880.0};

    DetectorConfig cfg = small_cfg(DetectorMethod::sta_lta);
    cfg.epsilon = 0.0;
    RatioSeries er = sta_lta(sig, cfg);
    for (std::size_t i = er.first_valid; i <= er.last_valid; ++i)
        CHECK(er.values[i] == doctest::Approx(1.0).epsilon(1e-12));

    cfg = small_cfg(DetectorMethod::ccw);
    cfg.epsilon = 0.0;
    RatioSeries cw = ccw(sig, cfg);
    for (std::size_t i = cw.first_valid; i <= cw.last_valid; ++i)
        CHECK(cw.values[i] == doctest::Approx(0.5).epsilon(1e-12));

    cfg = small_cfg(DetectorMethod::mer);
    cfg.epsilon = 0.0;
    RatioSeries m = mer(sig, cfg);
    for (std::size_t i = m.first_valid; i <= m.last_valid; ++i)
        CHECK(m.values[i] == doctest::Approx(c * c * c).epsilon(1e-12));
}

TEST_CASE("all-zero signal with epsilon guard yields zero ratios") {
    Signal sig{std::vector<double>(500, 0.0), 880.0};
    for (DetectorMethod m : {DetectorMethod::sta_lta, DetectorMethod::mer, DetectorMethod::ccw}) {
        DetectorConfig cfg = small_cfg(m);
        cfg.epsilon = 1e-12;
        RatioSeries rs = compute_ratio(sig, cfg);
        for (double v : rs.values) CHECK(v == 0.0);
    }
}

TEST_CASE("detectors match the direct-summation oracles") {
    auto x = testutil::random_samples(500, 31337);
    Signal sig{x, 880.0};

    DetectorConfig cfg = small_cfg(DetectorMethod::sta_lta);
    CHECK(testutil::max_rel_error(sta_lta(sig, cfg).values,
                                  oracles::sta_lta(x, cfg.short_len, cfg.long_len, cfg.epsilon)) <=
          1e-9);

    cfg = small_cfg(DetectorMethod::mer);
    CHECK(testutil::max_rel_error(mer(sig, cfg).values,
                                  oracles::mer(x, cfg.window_len, cfg.epsilon)) <= 1e-9);

    cfg = small_cfg(DetectorMethod::ccw);
    CHECK(testutil::max_rel_error(ccw(sig, cfg).values,
                                  oracles::ccw(x, cfg.short_len, cfg.long_len, cfg.epsilon)) <=
          1e-9);
}

TEST_CASE("impulse peak location matches the oracle") {
    std::vector<double> x(400, 0.01);
    x[200] = 1.0;
    DetectorConfig cfg = small_cfg(DetectorMethod::sta_lta);
    RatioSeries rs = sta_lta(Signal{x, 880.0}, cfg);
    auto naive = oracles::sta_lta(x, cfg.short_len, cfg.long_len, cfg.epsilon);
    std::size_t lib_peak = 0, naive_peak = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rs.values[i] > rs.values[lib_peak]) lib_peak = i;
        if (naive[i] > naive[naive_peak]) naive_peak = i;
    }
    CHECK(lib_peak == naive_peak);
    CHECK(rs.values[lib_peak] == doctest::Approx(naive[naive_peak]).epsilon(1e-9));
}

TEST_CASE("scale invariance and mer cubic scaling") {
    auto x = testutil::random_samples(600, 7);
    std::vector<double> scaled = x;
    const double c = 3.7;
    for (double& v : scaled) v *= c;

    DetectorConfig cfg = small_cfg(DetectorMethod::sta_lta);
    cfg.epsilon = 0.0;
    CHECK(testutil::max_rel_error(sta_lta(Signal{x, 880.0}, cfg).values,
                                  sta_lta(Signal{scaled, 880.0}, cfg).values) <= 1e-9);

    cfg = small_cfg(DetectorMethod::ccw);
    cfg.epsilon = 0.0;
    CHECK(testutil::max_rel_error(ccw(Signal{x, 880.0}, cfg).values,
                                  ccw(Signal{scaled, 880.0}, cfg).values) <= 1e-9);

    cfg = small_cfg(DetectorMethod::mer);
    cfg.epsilon = 0.0;
    auto base = mer(Signal{x, 880.0}, cfg).values;
    auto big = mer(Signal{scaled, 880.0}, cfg).values;
    for (double& v : base) v *= c * c * c;
    CHECK(testutil::max_rel_error(big, base) <= 1e-9);
}

TEST_CASE("shift equivariance") {
    const std::size_t shift = 37;
    auto x = testutil::random_samples(500, 13);
    std::vector<double> shifted(x.size() + shift, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) shifted[i + shift] = x[i];

    DetectorConfig cfg = small_cfg(DetectorMethod::ccw);
    auto a = ccw(Signal{x, 880.0}, cfg);
    auto b = ccw(Signal{shifted, 880.0}, cfg);
    // interior indices unaffected by the zero padding at the edges
    for (std::size_t i = a.first_valid + cfg.long_len + cfg.short_len;
         i + shift <= a.last_valid; ++i)
        CHECK(b.values[i + shift] == doctest::Approx(a.values[i]).epsilon(1e-9));
}

TEST_CASE("ratios stay finite and non-negative with the epsilon guard") {
    auto x = testutil::gaussian_samples(800, 5, 2.0);
    x[100] = 0.0;
    for (DetectorMethod m : {DetectorMethod::sta_lta, DetectorMethod::mer, DetectorMethod::ccw}) {
        DetectorConfig cfg = small_cfg(m);
        RatioSeries rs = compute_ratio(Signal{x, 880.0}, cfg);
        for (double v : rs.values) {
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("threshold segmentation follows the crossing rules") {
    DetectorConfig cfg;
    cfg.threshold = 1.0;

    auto segs = threshold_segments(from_values({0, 0, 5, 5, 0}), cfg);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].start_index == 1);
    CHECK(segs[0].end_index == 3);

    CHECK(threshold_segments(from_values({0.1, 0.2, 0.1, 0.4}), cfg).empty());

    segs = threshold_segments(from_values({0, 5, 0, 5, 0}), cfg);
    CHECK(segs.size() == 2);

    // ends above threshold: the open segment is dropped
    segs = threshold_segments(from_values({0, 0, 5, 5, 5}), cfg);
    CHECK(segs.empty());

    // starts above threshold: no start crossing was seen
    segs = threshold_segments(from_values({5, 5, 0, 0, 0}), cfg);
    CHECK(segs.empty());
}

TEST_CASE("segments are disjoint and sorted") {
    auto vals = testutil::random_samples(2000, 911, 0.0, 2.0);
    DetectorConfig cfg;
    cfg.threshold = 1.2;
    auto segs = threshold_segments(from_values(vals), cfg);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        CHECK(segs[i].start_index < segs[i].end_index);
        if (i > 0) CHECK(segs[i].start_index > segs[i - 1].end_index);
    }
}

TEST_CASE("length gate keeps the footfall band") {
    DetectorConfig cfg; // min 66, max 312
    std::vector<DetectedSegment> segs = {
        {1000, 1189, DetectorMethod::sta_lta}, // 190 samples
        {2000, 2009, DetectorMethod::sta_lta}, // 10 samples
        {3000, 3399, DetectorMethod::sta_lta}, // 400 samples
    };
    auto kept = gate_by_length(segs, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].start_index == 1000);
}

TEST_CASE("event extraction window arithmetic") {
    Signal sig{testutil::random_samples(2200, 1), 880.0};
    DetectorConfig cfg; // event_len 190 -> effective 191, half 95
    DetectedSegment seg{1000, 1100, DetectorMethod::sta_lta};

    ExtractedEvent ev = extract_event(sig, seg, cfg);
    CHECK(ev.poi == 1050);
    CHECK(ev.samples.size() == static_cast<std::size_t>(cfg.effective_event_len()));
    CHECK(ev.samples.front() == sig.samples[955]);
    CHECK(ev.samples.back() == sig.samples[1145]);

    DetectorConfig biased = cfg;
    biased.bias = 20;
    ExtractedEvent ev2 = extract_event(sig, seg, biased);
    CHECK(ev2.samples.front() == sig.samples[975]);
    CHECK(ev2.samples.back() == sig.samples[1165]);

    DetectedSegment head{0, 40, DetectorMethod::sta_lta};
    CHECK_THROWS_AS(extract_event(sig, head, cfg), BoundaryError);
}

TEST_CASE("signal shorter than the windows is rejected") {
    Signal tiny{testutil::random_samples(64, 2), 880.0};
    DetectorConfig cfg = DetectorConfig::defaults_for(DetectorMethod::sta_lta);
    CHECK_THROWS_AS(sta_lta(tiny, cfg), ShapeError);
    cfg = DetectorConfig::defaults_for(DetectorMethod::ccw);
    CHECK_THROWS_AS(ccw(tiny, cfg), ShapeError);
}

TEST_CASE("match counting: detected, missed, merged") {
    std::vector<DetectedSegment> segs = {
        {90, 110, DetectorMethod::sta_lta},   // poi 100 -> center 100
        {180, 420, DetectorMethod::sta_lta},  // poi 300 -> spans centers 290 and 320
        {700, 760, DetectorMethod::sta_lta},  // poi 730 -> nothing
    };
    std::vector<std::size_t> centers = {100, 290, 320, 900};
    MatchCounts mc = match_segments(segs, centers, 50);
    CHECK(mc.detected == 3);  // 100 plus the two merged-segment centers
    CHECK(mc.missed == 1);    // 900
    CHECK(mc.merged == 1);
    CHECK(mc.false_alarms == 1);
}

TEST_CASE("a wide segment counts as merged even when its PoI drifts") {
    // spans both centers but its midpoint is close to neither
    std::vector<DetectedSegment> segs = {{100, 700, DetectorMethod::sta_lta}};
    std::vector<std::size_t> centers = {150, 650};
    MatchCounts mc = match_segments(segs, centers, 95);
    CHECK(mc.merged == 1);
    CHECK(mc.detected == 0);
    CHECK(mc.missed == 2);
    CHECK(mc.false_alarms == 1); // no PoI match either
}

TEST_CASE("benchmark on an empty truth list") {
    Signal sig{testutil::random_samples(2000, 3), 880.0};
    auto report = run_detector_benchmark(sig, {},
                                         {DetectorConfig::defaults_for(DetectorMethod::sta_lta)},
                                         3);
    REQUIRE(report.results.size() == 1);
    CHECK(report.results[0].detected == 0);
    CHECK(report.results[0].missed == 0);
    CHECK(report.results[0].merged == 0);
    CHECK(report.results[0].exec_time_ms > 0.0);
}

TEST_CASE("bench report serialization carries the table columns") {
    BenchReport report;
    report.results.push_back({DetectorMethod::ccw, 10, 0, 1, 16.48});
    const std::string csv = report.to_csv();
    CHECK(csv.find("method,detected,missed,merged,exec_time_ms") != std::string::npos);
    CHECK(csv.find("ccw,10,0,1") != std::string::npos);
    const std::string json = report.to_json();
    CHECK(json.find("\"detected\": 10") != std::string::npos);
}
