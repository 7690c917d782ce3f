#include "footfall/features.hpp"

#include <cmath>
#include <limits>

#include "footfall/signal_io.hpp"
#include "footfall/spectrum.hpp"

namespace footfall {

ReferencePattern load_reference_pattern(const std::filesystem::path& path,
                                        std::size_t expected_len) {
    Signal sig = load_signal(path, SignalFormat::csv, kDefaultSampleRateHz);
    if (sig.size() != expected_len)
        throw ShapeError("reference pattern length " + std::to_string(sig.size()) +
                         " does not match the event length " + std::to_string(expected_len));
    return ReferencePattern{normalize_amplitude(std::span<const double>(sig.samples))};
}

void save_reference_pattern(const ReferencePattern& ref, const std::filesystem::path& path) {
    write_signal_csv(Signal{ref.samples, kDefaultSampleRateHz}, path);
}

std::array<double, kFeatureCount> FeatureVector::as_array() const {
    return {event_length, zero_crossings, pred_frequency, max_cross_corr,
            cross_corr_0, mse,            dtw,            skewness,
            kurtosis};
}

FeatureVector FeatureVector::from_array(const std::array<double, kFeatureCount>& a) {
    FeatureVector f;
    f.event_length = a[0];
    f.zero_crossings = a[1];
    f.pred_frequency = a[2];
    f.max_cross_corr = a[3];
    f.cross_corr_0 = a[4];
    f.mse = a[5];
    f.dtw = a[6];
    f.skewness = a[7];
    f.kurtosis = a[8];
    return f;
}

std::size_t zero_crossings(std::span<const double> x) {
    if (x.size() < 2) throw ShapeError("zero_crossings needs at least 2 samples");
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (x[i] * x[i + 1] < 0.0) ++count;
    return count;
}

double predominant_frequency(std::span<const double> x, double sample_rate_hz) {
    Signal sig{std::vector<double>(x.begin(), x.end()), sample_rate_hz};
    bool all_zero = true;
    for (double v : x)
        if (v != 0.0) { all_zero = false; break; }
    if (all_zero) throw DegenerateInputError("predominant frequency of an all-zero event");
    PowerSpectrum ps = power_spectrum(sig);
    // Exclude the DC bin. The spectrum is zero-padded, so the original DC
    // bin covers [0, fs/N): skip every interpolated bin inside that cell.
    const double dc_cell = sample_rate_hz / static_cast<double>(x.size());
    std::size_t start = 1;
    while (start + 1 < ps.freqs_hz.size() && ps.freqs_hz[start] < dc_cell) ++start;
    std::size_t best = start;
    for (std::size_t k = start + 1; k < ps.power.size(); ++k)
        if (ps.power[k] > ps.power[best]) best = k;
    return ps.freqs_hz[best];
}

CrossCorrelation cross_correlation(std::span<const double> x, const ReferencePattern& ref) {
    const std::size_t n = x.size();
    if (n != ref.samples.size())
        throw ShapeError("cross_correlation length mismatch: " + std::to_string(n) + " vs " +
                         std::to_string(ref.samples.size()));
    CrossCorrelation out;
    out.max_value = -std::numeric_limits<double>::infinity();
    const long long nn = static_cast<long long>(n);
    for (long long tau = -(nn - 1); tau <= nn - 1; ++tau) {
        double r = 0.0;
        for (long long i = 0; i < nn; ++i) {
            long long j = i + tau;
            if (j >= 0 && j < nn) r += x[i] * ref.samples[j];
        }
        if (r > out.max_value) out.max_value = r;
        if (tau == 0) out.at_zero = r;
    }
    return out;
}

double mean_squared_error(std::span<const double> x, const ReferencePattern& ref) {
    if (x.size() != ref.samples.size())
        throw ShapeError("mse length mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(ref.samples.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - ref.samples[i];
        sum += d * d;
    }
    return sum / static_cast<double>(x.size());
}

double dtw_cost(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    if (n == 0 || m == 0) throw ShapeError("dtw_cost needs non-empty inputs");

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m, inf), cur(m, inf);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double cost = std::fabs(x[i] - y[j]);
            double best;
            if (i == 0 && j == 0) best = 0.0;
            else if (i == 0) best = cur[j - 1];
            else if (j == 0) best = prev[j];
            else best = std::min({prev[j], cur[j - 1], prev[j - 1]});
            cur[j] = cost + best;
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

namespace {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

Moments central_moments(std::span<const double> x) {
    if (x.size() < 2) throw ShapeError("moments need at least 2 samples");
    const double n = static_cast<double>(x.size());
    Moments m;
    for (double v : x) m.mean += v;
    m.mean /= n;
    double m2 = 0.0;
    for (double v : x) {
        double d = v - m.mean;
        double d2 = d * d;
        m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    m.sd = std::sqrt(m2);
    if (m.sd == 0.0)
        throw DegenerateInputError("moments of a constant sequence are undefined");
    return m;
}

} // namespace

double skewness(std::span<const double> x) {
    Moments m = central_moments(x);
    return m.m3 / (m.sd * m.sd * m.sd);
}

double kurtosis(std::span<const double> x) {
    Moments m = central_moments(x);
    return m.m4 / (m.sd * m.sd * m.sd * m.sd);
}

FeatureVector extract_features(const ExtractedEvent& ev, const DetectedSegment& seg,
                               const ReferencePattern& ref, double sample_rate_hz) {
    std::vector<double> x = normalize_amplitude(std::span<const double>(ev.samples));

    FeatureVector f;
    f.event_length = static_cast<double>(seg.length());
    f.zero_crossings = static_cast<double>(zero_crossings(x));
    f.pred_frequency = predominant_frequency(x, sample_rate_hz);
    CrossCorrelation cc = cross_correlation(x, ref);
    f.max_cross_corr = cc.max_value;
    f.cross_corr_0 = cc.at_zero;
    f.mse = mean_squared_error(x, ref);
    f.dtw = dtw_cost(x, ref.samples);
    f.skewness = skewness(x);
    f.kurtosis = kurtosis(x);
    return f;
}

} // namespace footfall
