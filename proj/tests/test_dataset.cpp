#include <doctest.h>

#include <cmath>
#include <fstream>

#include "footfall/cross_validation.hpp"
#include "footfall/dataset.hpp"
#include "footfall/metrics.hpp"
#include "test_util.hpp"

using namespace footfall;

namespace {

Dataset toy_dataset(std::size_t n_per_class, std::size_t dim, std::uint64_t seed) {
    Dataset ds;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        DataRow row;
        const int label = i < n_per_class ? +1 : -1;
        for (std::size_t j = 0; j < dim; ++j) row.features.push_back(g(rng) + 3.0 * label);
        row.label = label;
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

} // namespace

TEST_CASE("standardize z-scores two points to +/-1") {
    Dataset ds;
    ds.rows.push_back({{0.0, 10.0}, +1, ""});
    ds.rows.push_back({{2.0, 14.0}, -1, ""});
    Dataset out = standardize(ds);
    CHECK(out.rows[0].features[0] == doctest::Approx(-1.0));
    CHECK(out.rows[1].features[0] == doctest::Approx(1.0));
    CHECK(out.rows[0].features[1] == doctest::Approx(-1.0));
    CHECK(out.rows[1].features[1] == doctest::Approx(1.0));
}

TEST_CASE("stored scaler reproduces zero mean unit variance") {
    Dataset ds = toy_dataset(60, 4, 5);
    Dataset out = standardize(ds);
    REQUIRE(out.scaler.has_value());

    Dataset again = apply_scaler(ds, *out.scaler);
    for (std::size_t j = 0; j < 4; ++j) {
        double mean = 0.0;
        for (const auto& r : again.rows) mean += r.features[j];
        mean /= static_cast<double>(again.rows.size());
        double var = 0.0;
        for (const auto& r : again.rows) var += (r.features[j] - mean) * (r.features[j] - mean);
        var /= static_cast<double>(again.rows.size());
        CHECK(std::fabs(mean) <= 1e-9);
        CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("constant feature is reported by name") {
    Dataset ds;
    for (int i = 0; i < 4; ++i) {
        DataRow r;
        r.features = {static_cast<double>(i), 0.0, static_cast<double>(i % 2), 1.0, 2.0,
                      3.0, 4.0, 5.0, static_cast<double>(i)};
        r.label = i % 2 == 0 ? 1 : -1;
        ds.rows.push_back(r);
    }
    try {
        standardize(ds);
        FAIL("expected DegenerateInputError");
    } catch (const DegenerateInputError& e) {
        CHECK(std::string(e.what()).find("zero_crossings") != std::string::npos);
    }
}

TEST_CASE("undersample trims only the majority class") {
    Dataset ds;
    for (int i = 0; i < 750; ++i) ds.rows.push_back({{static_cast<double>(i)}, -1, "cattle"});
    for (int i = 0; i < 120; ++i) ds.rows.push_back({{static_cast<double>(i)}, +1, "elephant"});

    Dataset out = undersample(ds, 120, 7);
    CHECK(out.count_label(-1) == 120);
    CHECK(out.count_label(+1) == 120);

    Dataset same_seed = undersample(ds, 120, 7);
    REQUIRE(same_seed.rows.size() == out.rows.size());
    for (std::size_t i = 0; i < out.rows.size(); ++i)
        CHECK(same_seed.rows[i].features[0] == out.rows[i].features[0]);

    Dataset other_seed = undersample(ds, 120, 8);
    bool differs = false;
    for (std::size_t i = 0; i < out.rows.size() && !differs; ++i)
        differs = other_seed.rows[i].features[0] != out.rows[i].features[0];
    CHECK(differs);
}

TEST_CASE("undersample edge conditions") {
    Dataset ds;
    for (int i = 0; i < 10; ++i) ds.rows.push_back({{1.0 * i}, -1, ""});
    for (int i = 0; i < 4; ++i) ds.rows.push_back({{2.0 * i}, +1, ""});

    Dataset unchanged = undersample(ds, 10, 3);
    CHECK(unchanged.rows.size() == 14);

    CHECK_THROWS_AS(undersample(ds, 11, 3), ConfigError);
}

TEST_CASE("feature csv round trip is byte-identical") {
    testutil::TempDir tmp("fcsv");
    Dataset ds = toy_dataset(10, kFeatureCount, 17);
    save_feature_csv(ds, tmp.file("a.csv"));
    Dataset back = load_feature_csv(tmp.file("a.csv"));
    save_feature_csv(back, tmp.file("b.csv"));

    std::ifstream fa(tmp.file("a.csv")), fb(tmp.file("b.csv"));
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa.rfind("event_length,zero_crossings,pred_frequency,max_cross_corr,cross_corr_0,"
                   "mse,dtw,skewness,kurtosis,label\n", 0) == 0);
}

TEST_CASE("feature csv rejects malformed input") {
    testutil::TempDir tmp("fcsv_bad");
    {
        std::ofstream out(tmp.file("bad.csv"));
        out << "wrong,header\n1,2\n";
    }
    CHECK_THROWS_AS(load_feature_csv(tmp.file("bad.csv")), ParseError);
    CHECK_THROWS_AS(load_feature_csv(tmp.file("missing.csv")), IoError);
}

TEST_CASE("metrics confusion arithmetic") {
    // tp=tn=fp=fn=1
    std::vector<int> pred{1, -1, 1, -1};
    std::vector<int> truth{1, -1, -1, 1};
    Metrics m = evaluate(pred, truth);
    CHECK(m.tp == 1);
    CHECK(m.tn == 1);
    CHECK(m.fp == 1);
    CHECK(m.fn == 1);
    CHECK(m.accuracy == doctest::Approx(0.5));
    CHECK(m.precision == doctest::Approx(0.5));
    CHECK(m.recall == doctest::Approx(0.5));
    CHECK(m.f1 == doctest::Approx(0.5));

    Metrics perfect = evaluate(truth, truth);
    CHECK(perfect.accuracy == doctest::Approx(1.0));
    CHECK(perfect.f1 == doctest::Approx(1.0));
}

TEST_CASE("metrics worked example") {
    // tp=8 fp=2 fn=4 tn=6
    std::vector<int> pred, truth;
    auto add = [&](int p, int t, int count) {
        for (int i = 0; i < count; ++i) {
            pred.push_back(p);
            truth.push_back(t);
        }
    };
    add(1, 1, 8);
    add(1, -1, 2);
    add(-1, 1, 4);
    add(-1, -1, 6);
    Metrics m = evaluate(pred, truth);
    CHECK(m.precision == doctest::Approx(0.8));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0));
    CHECK(m.f1 == doctest::Approx(2.0 * (0.8 * 2.0 / 3.0) / (0.8 + 2.0 / 3.0)));
    CHECK(m.f1 == doctest::Approx(0.727).epsilon(1e-3));
    CHECK(m.f1 >= std::min(m.precision, m.recall));
    CHECK(m.f1 <= std::max(m.precision, m.recall));
}

TEST_CASE("zero denominators yield zero scores") {
    std::vector<int> pred{-1, -1};
    std::vector<int> truth{-1, -1};
    Metrics m = evaluate(pred, truth);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.accuracy == doctest::Approx(1.0));

    CHECK_THROWS_AS(evaluate(std::vector<int>{1}, std::vector<int>{1, -1}), ShapeError);
}

TEST_CASE("kfold cv is the exact mean of fold accuracies") {
    Dataset ds = toy_dataset(40, 2, 99);

    // trivial trainer: always predict the training majority
    Trainer trainer = [](const Dataset& train) -> Predictor {
        const int majority =
            train.count_label(+1) >= train.count_label(-1) ? +1 : -1;
        return [majority](const std::vector<double>&) { return majority; };
    };

    CvResult r = kfold_cv(ds, 10, trainer, 123);
    REQUIRE(r.fold_accuracies.size() == 10);
    double sum = 0.0;
    for (double a : r.fold_accuracies) sum += a;
    CHECK(r.cv_accuracy == sum / 10.0); // bitwise: same arithmetic

    CvResult again = kfold_cv(ds, 10, trainer, 123);
    CHECK(again.cv_accuracy == r.cv_accuracy);
    CHECK(again.fold_accuracies == r.fold_accuracies);
}

TEST_CASE("kfold cv validates its inputs") {
    Dataset ds = toy_dataset(5, 2, 7);
    Trainer trainer = [](const Dataset&) -> Predictor {
        return [](const std::vector<double>&) { return 1; };
    };
    CHECK_THROWS_AS(kfold_cv(ds, 1, trainer, 0), ConfigError);
    CHECK_THROWS_AS(kfold_cv(ds, 6, trainer, 0), ConfigError); // 5 rows per class < k
}
