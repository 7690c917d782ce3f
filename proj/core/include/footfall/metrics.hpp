#pragma once

#include <span>
#include <string>

#include "footfall/errors.hpp"

namespace footfall {

// Binary confusion counts and derived scores; the positive class is +1.
// Precision, recall and F1 are defined as 0 when their denominators vanish.
struct Metrics {
    long tp = 0, tn = 0, fp = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    std::string to_json(const std::string& case_name = "") const;
};

Metrics evaluate(std::span<const int> predicted, std::span<const int> truth);

} // namespace footfall
