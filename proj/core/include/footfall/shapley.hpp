#pragma once

#include <functional>
#include <string>
#include <vector>

#include "footfall/errors.hpp"

namespace footfall {

using ScoringFunction = std::function<double(const std::vector<double>&)>;

// phi[i] sums to model_output - base_value (efficiency axiom, within float
// accumulation error).
struct ShapExplanation {
    std::vector<double> phi;
    double base_value = 0.0;
    double model_output = 0.0;
};

// Exact Shapley attribution over all 2^n feature coalitions. The coalition
// value f(S) evaluates the model with features outside S replaced by their
// background values (interventional masking); one model call per coalition.
// Throws NumericError (naming the coalition) on a non-finite model output
// and ConfigError when the dimension makes enumeration unreasonable (> 20).
ShapExplanation exact_shapley(const ScoringFunction& score,
                              const std::vector<double>& background,
                              const std::vector<double>& instance);

// Multi-sample background: f(S) averages the masked model output over the
// background set.
ShapExplanation exact_shapley(const ScoringFunction& score,
                              const std::vector<std::vector<double>>& background_set,
                              const std::vector<double>& instance);

struct ImpactSummary {
    std::vector<double> mean_abs_phi;      // per feature, input order
    std::vector<std::size_t> ranking;      // feature indices, descending impact
    std::string to_csv(const std::vector<std::string>& feature_names) const;
};

// Mean |phi| per feature over explanations; ranking ties resolve to the
// lower feature index.
ImpactSummary impact_summary(const std::vector<ShapExplanation>& explanations);

} // namespace footfall
