#include <doctest.h>

#include <cmath>

#include "footfall/ann.hpp"
#include "footfall/model_io.hpp"
#include "test_util.hpp"

using namespace footfall;

namespace {

Dataset blob_dataset(std::size_t n_per_class, std::uint64_t seed, double sep = 2.0) {
    Dataset ds;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        const int label = i < n_per_class ? +1 : -1;
        ds.rows.push_back({{g(rng) + sep * label, g(rng) - sep * label}, label, ""});
    }
    return ds;
}

AnnConfig toy_config(int input_dim) {
    AnnConfig cfg;
    cfg.layer_sizes = {input_dim, 16, 8, 1};
    cfg.batch_norm = {true, false};
    cfg.dropout_rates = {0.0, 0.0, 0.0};
    cfg.epochs = 200;
    cfg.batch_size = 32;
    return cfg;
}

} // namespace

TEST_CASE("analytic gradients match central finite differences") {
    // 9-8-1 network, no BN, dropout off
    AnnConfig cfg;
    cfg.layer_sizes = {9, 8, 1};
    cfg.batch_norm = {false};
    AnnModel model;
    {
        Dataset ds;
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < 16; ++i) {
            DataRow r;
            for (int j = 0; j < 9; ++j) r.features.push_back(g(rng));
            r.label = i % 2 == 0 ? 1 : -1;
            ds.rows.push_back(r);
        }
        AnnConfig warm = cfg;
        warm.epochs = 1;
        model = train_ann(standardize(ds), warm, 7);
    }

    std::vector<std::vector<double>> batch_x;
    std::vector<double> batch_y;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 6; ++i) {
        std::vector<double> row(9);
        for (double& v : row) v = g(rng);
        batch_x.push_back(row);
        batch_y.push_back(i % 2 == 0 ? 1.0 : 0.0);
    }

    AnnGradients grads;
    ann_batch_loss(model, batch_x, batch_y, /*bn_training=*/false, &grads);

    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        for (std::size_t k = 0; k < model.weights[l].size(); ++k) {
            AnnModel plus = model, minus = model;
            plus.weights[l][k] += h;
            minus.weights[l][k] -= h;
            const double numeric = (ann_batch_loss(plus, batch_x, batch_y, false) -
                                    ann_batch_loss(minus, batch_x, batch_y, false)) /
                                   (2.0 * h);
            const double analytic = grads.weights[l][k];
            const double rel = std::fabs(analytic - numeric) /
                               std::max(1e-8, std::fabs(analytic) + std::fabs(numeric));
            worst = std::max(worst, rel);
        }
        for (std::size_t k = 0; k < model.biases[l].size(); ++k) {
            AnnModel plus = model, minus = model;
            plus.biases[l][k] += h;
            minus.biases[l][k] -= h;
            const double numeric = (ann_batch_loss(plus, batch_x, batch_y, false) -
                                    ann_batch_loss(minus, batch_x, batch_y, false)) /
                                   (2.0 * h);
            const double rel = std::fabs(grads.biases[l][k] - numeric) /
                               std::max(1e-8, std::fabs(grads.biases[l][k]) + std::fabs(numeric));
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("gradients through training-mode batch norm check out") {
    AnnConfig cfg;
    cfg.layer_sizes = {4, 6, 1};
    cfg.batch_norm = {true};
    Dataset ds = blob_dataset(12, 5);
    for (auto& r : ds.rows) r.features.resize(4, 0.7);
    AnnConfig warm = cfg;
    warm.epochs = 1;
    AnnModel model = train_ann(standardize(ds), warm, 3);

    std::vector<std::vector<double>> batch_x;
    std::vector<double> batch_y;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 8; ++i) {
        std::vector<double> row(4);
        for (double& v : row) v = g(rng);
        batch_x.push_back(row);
        batch_y.push_back(i % 2 == 0 ? 1.0 : 0.0);
    }

    AnnGradients grads;
    ann_batch_loss(model, batch_x, batch_y, /*bn_training=*/true, &grads);

    const double h = 1e-5;
    double worst = 0.0;
    auto probe = [&](std::vector<double>& param, const std::vector<double>& analytic) {
        for (std::size_t k = 0; k < param.size(); ++k) {
            const double saved = param[k];
            param[k] = saved + h;
            const double up = ann_batch_loss(model, batch_x, batch_y, true);
            param[k] = saved - h;
            const double dn = ann_batch_loss(model, batch_x, batch_y, true);
            param[k] = saved;
            const double numeric = (up - dn) / (2.0 * h);
            const double rel = std::fabs(analytic[k] - numeric) /
                               std::max(1e-6, std::fabs(analytic[k]) + std::fabs(numeric));
            worst = std::max(worst, rel);
        }
    };
    probe(model.weights[0], grads.weights[0]);
    probe(model.batch_norm[0]->gamma, grads.bn_gamma[0]);
    probe(model.batch_norm[0]->beta, grads.bn_beta[0]);
    CHECK(worst < 1e-4);
}

TEST_CASE("separable toy set: loss decreases and accuracy reaches 100%") {
    Dataset raw = blob_dataset(100, 42, 2.5);
    Dataset ds = standardize(raw);
    AnnModel model = train_ann(ds, toy_config(2), 11);

    REQUIRE(model.epoch_losses.size() == 200);
    for (double l : model.epoch_losses) CHECK(std::isfinite(l));
    for (int e = 1; e <= 10; ++e) CHECK(model.epoch_losses[e] < model.epoch_losses[e - 1]);
    CHECK(model.epoch_losses.back() < model.epoch_losses.front());

    int correct = 0;
    for (const auto& r : raw.rows)
        if (model.predict_label(r.features) == r.label) ++correct;
    CHECK(correct == static_cast<int>(raw.rows.size()));
}

TEST_CASE("identical inputs with mixed labels plateau at the label entropy") {
    Dataset ds;
    const int n = 60;
    const double p = 0.25; // fraction of positive labels
    for (int i = 0; i < n; ++i) {
        DataRow r;
        r.features = {0.5, -0.5};
        r.label = i < n * p ? +1 : -1;
        ds.rows.push_back(r);
    }
    ds.scaler = Scaler{{0.0, 0.0}, {1.0, 1.0}}; // inputs constant; identity scaler

    AnnConfig cfg = toy_config(2);
    cfg.batch_norm = {false, false};
    cfg.epochs = 4000;
    cfg.batch_size = n; // full batch: the label ratio is exact every step
    AnnModel model = train_ann(ds, cfg, 5);

    const double entropy = -(p * std::log(p) + (1 - p) * std::log(1 - p));
    CHECK(model.epoch_losses.back() == doctest::Approx(entropy).epsilon(0.02));
}

TEST_CASE("forward pass matches an independent per-layer recomputation") {
    Dataset ds = standardize(blob_dataset(30, 8));
    AnnConfig cfg = toy_config(2);
    cfg.epochs = 30;
    AnnModel model = train_ann(ds, cfg, 17);

    std::vector<double> raw{1.3, -0.4};
    std::vector<double> x = apply_scaler(raw, model.scaler);

    // hand-rolled forward with the stored parameters
    std::vector<double> a = x;
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t n_in = model.layer_sizes[l];
        const std::size_t n_out = model.layer_sizes[l + 1];
        std::vector<double> z(n_out, 0.0);
        for (std::size_t o = 0; o < n_out; ++o) {
            z[o] = model.biases[l][o];
            for (std::size_t i = 0; i < n_in; ++i)
                z[o] += model.weights[l][o * n_in + i] * a[i];
        }
        if (l + 1 == model.layer_sizes.size() - 1) {
            a = {1.0 / (1.0 + std::exp(-z[0]))};
            break;
        }
        if (model.batch_norm[l]) {
            const auto& bn = *model.batch_norm[l];
            for (std::size_t o = 0; o < n_out; ++o)
                z[o] = bn.gamma[o] * (z[o] - bn.running_mean[o]) /
                           std::sqrt(bn.running_var[o] + model.bn_epsilon) +
                       bn.beta[o];
        }
        for (double& v : z) v = std::max(0.0, v);
        a = z;
    }
    CHECK(model.predict_probability(raw) == doctest::Approx(a[0]).epsilon(1e-9));
}

TEST_CASE("zero-weight network outputs one half") {
    AnnConfig cfg = toy_config(2);
    Dataset ds = standardize(blob_dataset(10, 3));
    AnnConfig warm = cfg;
    warm.epochs = 1;
    AnnModel model = train_ann(ds, warm, 2);
    for (auto& w : model.weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : model.biases) std::fill(b.begin(), b.end(), 0.0);
    for (auto& bn : model.batch_norm)
        if (bn) {
            std::fill(bn->beta.begin(), bn->beta.end(), 0.0);
            std::fill(bn->running_mean.begin(), bn->running_mean.end(), 0.0);
        }
    std::vector<double> probe{0.3, -0.8};
    CHECK(model.predict_probability(probe) == doctest::Approx(0.5));
}

TEST_CASE("probabilities stay inside (0, 1)") {
    Dataset ds = standardize(blob_dataset(40, 21));
    AnnConfig cfg = toy_config(2);
    cfg.epochs = 50;
    AnnModel model = train_ann(ds, cfg, 9);
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto p = testutil::random_samples(2, 700 + s, -50.0, 50.0);
        double prob = model.predict_probability(p);
        CHECK(prob > 0.0);
        CHECK(prob < 1.0);
    }
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
    Dataset ds = standardize(blob_dataset(30, 12));
    AnnConfig cfg = toy_config(2);
    cfg.epochs = 20;
    AnnModel a = train_ann(ds, cfg, 777);
    AnnModel b = train_ann(ds, cfg, 777);
    CHECK(a.epoch_losses == b.epoch_losses);
    CHECK(a.weights == b.weights);
    AnnModel c = train_ann(ds, cfg, 778);
    CHECK(a.weights != c.weights);
}

TEST_CASE("reference architecture trains on 9-feature data") {
    Dataset ds;
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 80; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        DataRow r;
        for (int j = 0; j < 9; ++j) r.features.push_back(g(rng) + 1.5 * label);
        r.label = label;
        ds.rows.push_back(r);
    }
    AnnConfig cfg = AnnConfig::reference();
    cfg.epochs = 30;
    AnnModel model = train_ann(standardize(ds), cfg, 55);

    int correct = 0;
    for (const auto& r : ds.rows)
        if (model.predict_label(r.features) == r.label) ++correct;
    CHECK(static_cast<double>(correct) / ds.rows.size() >= 0.95);
}

TEST_CASE("non-finite loss raises a divergence error naming the batch") {
    Dataset ds;
    for (int i = 0; i < 8; ++i) {
        DataRow r;
        r.features = {i < 4 ? 1e308 : -1e308, 1.0};
        r.label = i % 2 == 0 ? 1 : -1;
        ds.rows.push_back(r);
    }
    ds.scaler = Scaler{{0.0, 0.0}, {1.0, 1.0}};
    AnnConfig cfg = toy_config(2);
    cfg.batch_norm = {false, false};
    cfg.epochs = 3;
    try {
        train_ann(ds, cfg, 1);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
}

TEST_CASE("ann model json round trip preserves probabilities") {
    testutil::TempDir tmp("ann_json");
    Dataset ds = standardize(blob_dataset(30, 14));
    AnnConfig cfg = toy_config(2);
    cfg.epochs = 20;
    AnnModel model = train_ann(ds, cfg, 6);
    save_model(model, tmp.file("ann.json"));

    AnyModel loaded = load_model(tmp.file("ann.json"));
    REQUIRE(std::holds_alternative<AnnModel>(loaded));
    const AnnModel& back = std::get<AnnModel>(loaded);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto p = testutil::random_samples(2, 400 + s, -3.0, 3.0);
        CHECK(back.predict_probability(p) ==
              doctest::Approx(model.predict_probability(p)).epsilon(1e-12));
    }
}
