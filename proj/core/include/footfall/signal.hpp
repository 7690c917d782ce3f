#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "footfall/errors.hpp"

namespace footfall {

inline constexpr double kDefaultSampleRateHz = 880.0;

// Uniformly sampled amplitude sequence. The substrate of all processing.
struct Signal {
    std::vector<double> samples;
    double sample_rate_hz = kDefaultSampleRateHz;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
    double nyquist_hz() const { return 0.5 * sample_rate_hz; }
};

// Throws ConfigError on a non-positive rate, DegenerateInputError on an
// empty signal, NumericError on NaN/Inf samples.
void validate(const Signal& sig);

// Scale so that max |sample| == 1; sign pattern preserved.
// Throws DegenerateInputError on an all-zero input.
std::vector<double> normalize_amplitude(std::span<const double> samples);
Signal normalize_amplitude(const Signal& sig);

} // namespace footfall
