#pragma once

#include <vector>

#include "footfall/signal.hpp"

namespace footfall {

enum class FilterKind { lowpass, bandstop };

// Butterworth design request. For a lowpass, `cutoff_hz` is the -3 dB point
// and `order` the filter order. For a bandstop, (`low_hz`, `high_hz`) are the
// stopband edges at which the response is exactly `stop_attenuation_db` down;
// `order` is the analog prototype order (the digital filter has 2x that) and
// the -3 dB edges are derived from the attenuation requirement.
struct FilterSpec {
    FilterKind kind = FilterKind::lowpass;
    int order = 6;
    double cutoff_hz = 80.0;
    double low_hz = 50.0;
    double high_hz = 60.0;
    double stop_attenuation_db = 60.0;

    static FilterSpec lowpass(int order, double cutoff_hz);
    static FilterSpec bandstop(int order, double low_hz, double high_hz,
                               double stop_attenuation_db = 60.0);
};

// One second-order section, direct form II transposed. a0 is normalized to 1.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

// Causal cascade of biquads with internal state.
class SosCascade {
public:
    SosCascade() = default;
    explicit SosCascade(std::vector<Biquad> sections);

    double step(double x);
    std::vector<double> process(std::span<const double> x);
    void reset();

    const std::vector<Biquad>& sections() const { return sections_; }

    // |H(e^{j 2 pi f / fs})| of the whole cascade.
    double gain_at(double freq_hz, double sample_rate_hz) const;
    // Decay time constant (samples) of the slowest pole; 5x this is a safe
    // steady-state warm-up for sine-gain measurements.
    double time_constant_samples() const;

private:
    std::vector<Biquad> sections_;
    std::vector<double> z1_, z2_;
};

// Bilinear-transform Butterworth design. Throws DesignError when cutoffs are
// not strictly inside (0, Nyquist), when order < 1, or when the realized
// poles are not strictly inside the unit circle.
SosCascade design_butterworth(const FilterSpec& spec, double sample_rate_hz);

// Filters causally; output length equals input length.
Signal butterworth_filter(const Signal& sig, const FilterSpec& spec);

} // namespace footfall
