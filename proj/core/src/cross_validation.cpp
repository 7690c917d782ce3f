#include "footfall/cross_validation.hpp"

#include <algorithm>
#include <random>

#include "footfall/metrics.hpp"

namespace footfall {

CvResult kfold_cv(const Dataset& ds, int k, const Trainer& trainer, std::uint64_t seed) {
    ds.validate();
    if (k < 2) throw ConfigError("k-fold cross validation requires k >= 2");
    const std::size_t pos = ds.count_label(+1);
    const std::size_t neg = ds.count_label(-1);
    if (pos < static_cast<std::size_t>(k) || neg < static_cast<std::size_t>(k))
        throw ConfigError("cannot stratify " + std::to_string(pos) + "+/" + std::to_string(neg) +
                          "- rows into " + std::to_string(k) + " folds");

    // deal each class round-robin into folds after a seeded shuffle
    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        (ds.rows[i].label == 1 ? pos_idx : neg_idx).push_back(i);
    std::mt19937_64 rng(seed);
    std::shuffle(pos_idx.begin(), pos_idx.end(), rng);
    std::shuffle(neg_idx.begin(), neg_idx.end(), rng);

    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < pos_idx.size(); ++i) folds[i % k].push_back(pos_idx[i]);
    for (std::size_t i = 0; i < neg_idx.size(); ++i) folds[i % k].push_back(neg_idx[i]);

    CvResult result;
    for (int f = 0; f < k; ++f) {
        Dataset train, test;
        for (int g = 0; g < k; ++g) {
            for (std::size_t idx : folds[g])
                (g == f ? test : train).rows.push_back(ds.rows[idx]);
        }
        Predictor predict = trainer(train);
        std::vector<int> predicted, truth;
        predicted.reserve(test.rows.size());
        truth.reserve(test.rows.size());
        for (const auto& r : test.rows) {
            predicted.push_back(predict(r.features));
            truth.push_back(r.label);
        }
        result.fold_accuracies.push_back(evaluate(predicted, truth).accuracy);
    }

    double sum = 0.0;
    for (double a : result.fold_accuracies) sum += a;
    result.cv_accuracy = sum / static_cast<double>(k);
    return result;
}

} // namespace footfall
