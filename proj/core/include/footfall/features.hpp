#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string_view>

#include "footfall/detect.hpp"
#include "footfall/signal.hpp"

namespace footfall {

inline constexpr std::size_t kFeatureCount = 9;

// Canonical feature order; also the column order of the interchange CSV.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "event_length", "zero_crossings", "pred_frequency",
    "max_cross_corr", "cross_corr_0", "mse",
    "dtw", "skewness", "kurtosis",
};

// Amplitude-normalized footfall template the pattern-matching features
// compare against.
struct ReferencePattern {
    std::vector<double> samples;
};

// Loads a single-column CSV, normalizes its amplitude and checks the length.
ReferencePattern load_reference_pattern(const std::filesystem::path& path,
                                        std::size_t expected_len);
void save_reference_pattern(const ReferencePattern& ref, const std::filesystem::path& path);

struct FeatureVector {
    double event_length = 0.0;
    double zero_crossings = 0.0;
    double pred_frequency = 0.0;
    double max_cross_corr = 0.0;
    double cross_corr_0 = 0.0;
    double mse = 0.0;
    double dtw = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;

    std::array<double, kFeatureCount> as_array() const;
    static FeatureVector from_array(const std::array<double, kFeatureCount>& a);
};

// Count of adjacent sample pairs with strictly negative product.
std::size_t zero_crossings(std::span<const double> x);

// Frequency of the largest one-sided power bin, DC excluded; ties resolve to
// the lower frequency. Throws DegenerateInputError on an all-zero input.
double predominant_frequency(std::span<const double> x, double sample_rate_hz);

struct CrossCorrelation {
    double max_value = 0.0;
    double at_zero = 0.0;
};

// R(tau) = sum_n x[n] * ref[n + tau] over all lags in [-(N-1), N-1], with
// out-of-range reference indices contributing zero. Returns the maximum over
// all lags and the lag-0 value. Lengths must match.
CrossCorrelation cross_correlation(std::span<const double> x, const ReferencePattern& ref);

double mean_squared_error(std::span<const double> x, const ReferencePattern& ref);

// Minimal cumulative |x[i] - y[j]| over monotone warping paths with steps
// {(1,0),(0,1),(1,1)} from (0,0) to (N-1,M-1).
double dtw_cost(std::span<const double> x, std::span<const double> y);

// Population third/fourth standardized moments (1/N throughout, no bias
// correction; kurtosis of a normal distribution is 3). Throw
// DegenerateInputError when the standard deviation is zero.
double skewness(std::span<const double> x);
double kurtosis(std::span<const double> x);

// All nine features from an extracted event. The event is amplitude-
// normalized first; event_length is the pre-extraction segment length.
// Degenerate constituents (all-zero or constant event) propagate, marking
// the event rejected.
FeatureVector extract_features(const ExtractedEvent& ev, const DetectedSegment& seg,
                               const ReferencePattern& ref, double sample_rate_hz);

} // namespace footfall
