#include "footfall/spectrum.hpp"

#include <cmath>
#include <numbers>

namespace footfall {

namespace detail {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n < 2) return;
    if ((n & (n - 1)) != 0)
        throw ConfigError("fft size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = data[i + k];
                std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace detail

std::size_t PowerSpectrum::peak_bin(bool exclude_dc) const {
    std::size_t start = exclude_dc ? 1 : 0;
    std::size_t best = start;
    for (std::size_t k = start + 1; k < power.size(); ++k)
        if (power[k] > power[best]) best = k;
    return best;
}

double PowerSpectrum::band_power(double lo_hz, double hi_hz) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k)
        if (freqs_hz[k] >= lo_hz && freqs_hz[k] <= hi_hz) sum += power[k];
    return sum;
}

double PowerSpectrum::total_energy() const {
    // Parseval for a one-sided spectrum of a real signal of length M:
    // sum x^2 = (P[0] + P[M/2] + 2 * sum_mid P[k]) / M
    if (power.empty() || transform_length == 0) return 0.0;
    double sum = power.front() + power.back();
    for (std::size_t k = 1; k + 1 < power.size(); ++k) sum += 2.0 * power[k];
    return sum / static_cast<double>(transform_length);
}

PowerSpectrum power_spectrum(const Signal& sig) {
    validate(sig);
    if (sig.size() < 2)
        throw DegenerateInputError("power spectrum needs at least 2 samples");

    const std::size_t n = sig.size();
    const std::size_t m = detail::next_pow2(4 * n);
    std::vector<std::complex<double>> buf(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) buf[i] = {sig.samples[i], 0.0};
    detail::fft_pow2(buf);

    PowerSpectrum ps;
    ps.transform_length = m;
    const std::size_t half = m / 2;
    ps.freqs_hz.resize(half + 1);
    ps.power.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        ps.freqs_hz[k] = static_cast<double>(k) * sig.sample_rate_hz / static_cast<double>(m);
        ps.power[k] = std::norm(buf[k]);
    }
    return ps;
}

} // namespace footfall
