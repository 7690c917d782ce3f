#include "footfall/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace footfall {

namespace {

using cplx = std::complex<double>;

// Analog Butterworth lowpass prototype poles (unit cutoff, no finite zeros).
std::vector<cplx> prototype_poles(int order) {
    std::vector<cplx> poles;
    poles.reserve(order);
    for (int k = 0; k < order; ++k) {
        double angle = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
        poles.emplace_back(std::cos(angle), std::sin(angle));
    }
    return poles;
}

struct ZpkDesign {
    std::vector<cplx> zeros;
    std::vector<cplx> poles;
};

double prewarp(double freq_hz, double fs) {
    return 2.0 * fs * std::tan(std::numbers::pi * freq_hz / fs);
}

// s -> s/wc
ZpkDesign analog_lowpass(int order, double wc) {
    ZpkDesign d;
    for (const cplx& p : prototype_poles(order)) d.poles.push_back(p * wc);
    // zeros all at infinity
    return d;
}

// s -> bw*s / (s^2 + w0^2); every prototype pole yields a conjugate pair and
// a zero pair at +/- j*w0.
ZpkDesign analog_bandstop(int order, double w0, double bw) {
    ZpkDesign d;
    for (const cplx& p : prototype_poles(order)) {
        cplx inv = 0.5 * bw / p;
        cplx r = std::sqrt(inv * inv - w0 * w0);
        d.poles.push_back(inv + r);
        d.poles.push_back(inv - r);
        d.zeros.emplace_back(0.0, w0);
        d.zeros.emplace_back(0.0, -w0);
    }
    return d;
}

// z = (2fs + s) / (2fs - s); zeros at infinity map to z = -1.
ZpkDesign bilinear(const ZpkDesign& analog, double fs) {
    ZpkDesign d;
    const double fs2 = 2.0 * fs;
    for (const cplx& p : analog.poles) d.poles.push_back((fs2 + p) / (fs2 - p));
    for (const cplx& z : analog.zeros) d.zeros.push_back((fs2 + z) / (fs2 - z));
    while (d.zeros.size() < d.poles.size()) d.zeros.emplace_back(-1.0, 0.0);
    return d;
}

// Group roots into conjugate pairs (or lone reals) and emit quadratic
// coefficients (1, c1, c2) for each pair.
struct RootPair {
    double c1 = 0.0, c2 = 0.0; // x^2 + c1 x + c2
    double magnitude = 0.0;
};

std::vector<RootPair> pair_roots(std::vector<cplx> roots) {
    std::vector<RootPair> pairs;
    std::vector<double> reals;
    constexpr double imag_tol = 1e-9;
    for (const cplx& r : roots) {
        if (r.imag() > imag_tol) {
            pairs.push_back({-2.0 * r.real(), std::norm(r), std::abs(r)});
        } else if (r.imag() >= -imag_tol) {
            reals.push_back(r.real());
        } // negative-imag roots are the conjugates of the ones kept above
    }
    std::sort(reals.begin(), reals.end());
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2)
        pairs.push_back({-(reals[i] + reals[i + 1]), reals[i] * reals[i + 1],
                         std::max(std::fabs(reals[i]), std::fabs(reals[i + 1]))});
    if (reals.size() % 2 == 1)
        pairs.push_back({-reals.back(), 0.0, std::fabs(reals.back())});
    return pairs;
}

SosCascade assemble_sections(const ZpkDesign& digital) {
    for (const cplx& p : digital.poles) {
        if (!(std::abs(p) < 1.0 - 1e-12))
            throw DesignError("unstable design: pole magnitude " + std::to_string(std::abs(p)));
    }
    auto pole_pairs = pair_roots(digital.poles);
    auto zero_pairs = pair_roots(digital.zeros);
    std::sort(pole_pairs.begin(), pole_pairs.end(),
              [](const RootPair& a, const RootPair& b) { return a.magnitude < b.magnitude; });
    if (zero_pairs.size() < pole_pairs.size()) zero_pairs.resize(pole_pairs.size());

    std::vector<Biquad> sections;
    sections.reserve(pole_pairs.size());
    for (std::size_t i = 0; i < pole_pairs.size(); ++i) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = zero_pairs[i].c1;
        s.b2 = zero_pairs[i].c2;
        s.a1 = pole_pairs[i].c1;
        s.a2 = pole_pairs[i].c2;
        // per-section unity DC gain; both designs here pass DC
        double num = s.b0 + s.b1 + s.b2;
        double den = 1.0 + s.a1 + s.a2;
        if (std::fabs(num) < 1e-300)
            throw DesignError("section has a zero at DC; cannot normalize");
        double scale = den / num;
        s.b0 *= scale;
        s.b1 *= scale;
        s.b2 *= scale;
        sections.push_back(s);
    }
    return SosCascade(std::move(sections));
}

} // namespace

FilterSpec FilterSpec::lowpass(int order, double cutoff_hz) {
    FilterSpec s;
    s.kind = FilterKind::lowpass;
    s.order = order;
    s.cutoff_hz = cutoff_hz;
    return s;
}

FilterSpec FilterSpec::bandstop(int order, double low_hz, double high_hz,
                                double stop_attenuation_db) {
    FilterSpec s;
    s.kind = FilterKind::bandstop;
    s.order = order;
    s.low_hz = low_hz;
    s.high_hz = high_hz;
    s.stop_attenuation_db = stop_attenuation_db;
    return s;
}

SosCascade::SosCascade(std::vector<Biquad> sections)
    : sections_(std::move(sections)),
      z1_(sections_.size(), 0.0),
      z2_(sections_.size(), 0.0) {}

double SosCascade::step(double x) {
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        const Biquad& s = sections_[i];
        double y = s.b0 * x + z1_[i];
        z1_[i] = s.b1 * x - s.a1 * y + z2_[i];
        z2_[i] = s.b2 * x - s.a2 * y;
        x = y;
    }
    return x;
}

std::vector<double> SosCascade::process(std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) y[n] = step(x[n]);
    return y;
}

void SosCascade::reset() {
    std::fill(z1_.begin(), z1_.end(), 0.0);
    std::fill(z2_.begin(), z2_.end(), 0.0);
}

double SosCascade::gain_at(double freq_hz, double sample_rate_hz) const {
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    const cplx zinv = std::exp(cplx(0.0, -w));
    cplx h(1.0, 0.0);
    for (const Biquad& s : sections_) {
        cplx num = s.b0 + s.b1 * zinv + s.b2 * zinv * zinv;
        cplx den = 1.0 + s.a1 * zinv + s.a2 * zinv * zinv;
        h *= num / den;
    }
    return std::abs(h);
}

double SosCascade::time_constant_samples() const {
    double max_mag = 0.0;
    for (const Biquad& s : sections_) {
        // roots of z^2 + a1 z + a2
        cplx disc = std::sqrt(cplx(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
        double m = std::max(std::abs((-s.a1 + disc) / 2.0), std::abs((-s.a1 - disc) / 2.0));
        max_mag = std::max(max_mag, m);
    }
    if (max_mag <= 0.0) return 1.0;
    return -1.0 / std::log(max_mag);
}

SosCascade design_butterworth(const FilterSpec& spec, double sample_rate_hz) {
    if (sample_rate_hz <= 0.0) throw DesignError("sample rate must be positive");
    if (spec.order < 1) throw DesignError("filter order must be >= 1");
    const double nyquist = 0.5 * sample_rate_hz;

    if (spec.kind == FilterKind::lowpass) {
        if (spec.cutoff_hz <= 0.0 || spec.cutoff_hz >= nyquist)
            throw DesignError("lowpass cutoff " + std::to_string(spec.cutoff_hz) +
                              " Hz must lie strictly inside (0, " + std::to_string(nyquist) + ")");
        double wc = prewarp(spec.cutoff_hz, sample_rate_hz);
        return assemble_sections(bilinear(analog_lowpass(spec.order, wc), sample_rate_hz));
    }

    if (spec.low_hz <= 0.0 || spec.high_hz >= nyquist || spec.low_hz >= spec.high_hz)
        throw DesignError("bandstop edges must satisfy 0 < low < high < Nyquist");
    if (spec.stop_attenuation_db <= 0.0)
        throw DesignError("stop attenuation must be positive");

    const double w_lo = prewarp(spec.low_hz, sample_rate_hz);
    const double w_hi = prewarp(spec.high_hz, sample_rate_hz);
    // Place the -3 dB edges so the response is exactly stop_attenuation_db
    // down at the given band edges: the prototype frequency there must equal
    // (10^(A/10) - 1)^(1/2n). Geometric center symmetry gives w0^2 = w_lo*w_hi
    // and a design bandwidth of omega_a * (w_hi - w_lo).
    const double omega_a =
        std::pow(std::pow(10.0, spec.stop_attenuation_db / 10.0) - 1.0,
                 1.0 / (2.0 * spec.order));
    const double w0 = std::sqrt(w_lo * w_hi);
    const double bw = omega_a * (w_hi - w_lo);
    return assemble_sections(bilinear(analog_bandstop(spec.order, w0, bw), sample_rate_hz));
}

Signal butterworth_filter(const Signal& sig, const FilterSpec& spec) {
    validate(sig);
    SosCascade cascade = design_butterworth(spec, sig.sample_rate_hz);
    return Signal{cascade.process(sig.samples), sig.sample_rate_hz};
}

} // namespace footfall
