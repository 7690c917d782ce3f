#pragma once

#include <complex>
#include <vector>

#include "footfall/signal.hpp"

namespace footfall {

// One-sided squared-magnitude spectrum; freqs_hz[k] = k * fs / M where M is
// the transform length.
struct PowerSpectrum {
    std::vector<double> freqs_hz;
    std::vector<double> power;
    std::size_t transform_length = 0;

    // Index of the largest bin, optionally skipping DC; ties resolve to the
    // lower frequency.
    std::size_t peak_bin(bool exclude_dc = false) const;
    // Sum of power over [lo_hz, hi_hz].
    double band_power(double lo_hz, double hi_hz) const;
    // Time-domain-equivalent energy implied by the one-sided spectrum.
    double total_energy() const;
};

// Rectangular window, zero-padded to the next power of two >= 4N.
PowerSpectrum power_spectrum(const Signal& sig);

namespace detail {
// In-place iterative radix-2 FFT; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& data);
std::size_t next_pow2(std::size_t n);
} // namespace detail

} // namespace footfall
