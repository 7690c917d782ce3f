#include "footfall/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace footfall {

namespace {

constexpr std::size_t kMaxEnumeratedFeatures = 20;

std::vector<double> shapley_weights(std::size_t n) {
    // weight(|S|) = |S|! (n - |S| - 1)! / n!
    std::vector<double> fact(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
    std::vector<double> w(n);
    for (std::size_t s = 0; s < n; ++s) w[s] = fact[s] * fact[n - s - 1] / fact[n];
    return w;
}

} // namespace

ShapExplanation exact_shapley(const ScoringFunction& score,
                              const std::vector<std::vector<double>>& background_set,
                              const std::vector<double>& instance) {
    const std::size_t n = instance.size();
    if (n == 0) throw ConfigError("exact_shapley: empty instance");
    if (n > kMaxEnumeratedFeatures)
        throw ConfigError("exact_shapley: " + std::to_string(n) +
                          " features exceed the enumeration limit of " +
                          std::to_string(kMaxEnumeratedFeatures));
    if (background_set.empty()) throw ConfigError("exact_shapley: empty background set");
    for (const auto& b : background_set)
        if (b.size() != n) throw ShapeError("exact_shapley: background dimension mismatch");

    const std::uint32_t n_masks = 1u << n;
    std::vector<double> value(n_masks);
    std::vector<double> masked(n);
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
        double acc = 0.0;
        for (const auto& bg : background_set) {
            for (std::size_t i = 0; i < n; ++i)
                masked[i] = (mask >> i) & 1u ? instance[i] : bg[i];
            acc += score(masked);
        }
        value[mask] = acc / static_cast<double>(background_set.size());
        if (!std::isfinite(value[mask])) {
            std::ostringstream os;
            os << "non-finite model output for coalition {";
            bool first = true;
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1u) {
                    if (!first) os << ", ";
                    os << i;
                    first = false;
                }
            os << "}";
            throw NumericError(os.str());
        }
    }

    const std::vector<double> weights = shapley_weights(n);
    ShapExplanation ex;
    ex.phi.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bit = 1u << i;
        for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
            if (mask & bit) continue;
            const std::size_t coalition = std::popcount(mask);
            ex.phi[i] += weights[coalition] * (value[mask | bit] - value[mask]);
        }
    }
    ex.base_value = value[0];
    ex.model_output = value[n_masks - 1];
    return ex;
}

ShapExplanation exact_shapley(const ScoringFunction& score, const std::vector<double>& background,
                              const std::vector<double>& instance) {
    return exact_shapley(score, std::vector<std::vector<double>>{background}, instance);
}

ImpactSummary impact_summary(const std::vector<ShapExplanation>& explanations) {
    if (explanations.empty()) throw DegenerateInputError("impact_summary: no explanations");
    const std::size_t n = explanations.front().phi.size();
    ImpactSummary summary;
    summary.mean_abs_phi.assign(n, 0.0);
    for (const auto& ex : explanations) {
        if (ex.phi.size() != n) throw ShapeError("impact_summary: inconsistent phi dimensions");
        for (std::size_t i = 0; i < n; ++i) summary.mean_abs_phi[i] += std::fabs(ex.phi[i]);
    }
    for (double& v : summary.mean_abs_phi) v /= static_cast<double>(explanations.size());

    summary.ranking.resize(n);
    for (std::size_t i = 0; i < n; ++i) summary.ranking[i] = i;
    std::stable_sort(summary.ranking.begin(), summary.ranking.end(),
                     [&](std::size_t a, std::size_t b) {
                         return summary.mean_abs_phi[a] > summary.mean_abs_phi[b];
                     });
    return summary;
}

std::string ImpactSummary::to_csv(const std::vector<std::string>& feature_names) const {
    if (feature_names.size() != mean_abs_phi.size())
        throw ShapeError("impact summary: feature name count mismatch");
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "feature,mean_abs_phi\n";
    for (std::size_t idx : ranking)
        os << feature_names[idx] << ',' << mean_abs_phi[idx] << '\n';
    return os.str();
}

} // namespace footfall
