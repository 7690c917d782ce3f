#pragma once

#include <cstdint>
#include <functional>

#include "footfall/dataset.hpp"

namespace footfall {

// A trainer receives a raw (unstandardized) training dataset and returns a
// predictor over raw feature rows. Scaling is the trainer's responsibility so
// every fold fits its own statistics.
using Predictor = std::function<int(const std::vector<double>&)>;
using Trainer = std::function<Predictor(const Dataset&)>;

struct CvResult {
    double cv_accuracy = 0.0;
    std::vector<double> fold_accuracies;
};

// Stratified, seeded k-fold cross validation; cv_accuracy is exactly the
// arithmetic mean of the fold accuracies. Requires k >= 2 and at least k rows
// of each class.
CvResult kfold_cv(const Dataset& ds, int k, const Trainer& trainer, std::uint64_t seed);

} // namespace footfall
