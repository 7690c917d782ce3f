#include <doctest.h>

#include <cmath>
#include <numbers>

#include "footfall/filter.hpp"
#include "test_util.hpp"

using namespace footfall;

namespace {
constexpr double kFs = 880.0;

SosCascade lowpass80() { return design_butterworth(FilterSpec::lowpass(6, 80.0), kFs); }
SosCascade bandstop5060() {
    return design_butterworth(FilterSpec::bandstop(6, 50.0, 60.0, 60.0), kFs);
}
} // namespace

TEST_CASE("dc passes the 80 Hz lowpass at unity") {
    SosCascade c = lowpass80();
    const std::size_t warmup = static_cast<std::size_t>(std::ceil(5.0 * c.time_constant_samples()));
    double last = 0.0;
    for (std::size_t n = 0; n < warmup + 500; ++n) last = c.step(1.0);
    CHECK(last == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lowpass passband and corner gains") {
    SosCascade c = lowpass80();
    const double g20 = testutil::measured_sine_gain(c, 20.0, kFs);
    CHECK(g20 >= 0.9);
    CHECK(g20 <= 1.0 + 1e-6);

    const double g80 = testutil::measured_sine_gain(c, 80.0, kFs);
    CHECK(g80 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("measured gains match the designed transfer function") {
    SosCascade c = lowpass80();
    for (double f : {10.0, 20.0, 40.0, 80.0, 120.0}) {
        const double analytic = c.gain_at(f, kFs);
        const double measured = testutil::measured_sine_gain(c, f, kFs);
        CHECK(measured == doctest::Approx(analytic).epsilon(2e-3));
    }
}

TEST_CASE("bandstop suppresses a 55 Hz tone by 60 dB") {
    const double g = testutil::measured_sine_gain(bandstop5060(), 55.0, kFs);
    CHECK(g <= 1e-3);
}

TEST_CASE("bandstop holds 60 dB across the whole stopband") {
    SosCascade c = bandstop5060();
    for (int f = 51; f <= 59; ++f) {
        CAPTURE(f);
        CHECK(testutil::measured_sine_gain(c, static_cast<double>(f), kFs) <= 1e-3);
    }
}

TEST_CASE("bandstop leaves the footfall band intact") {
    SosCascade c = bandstop5060();
    CHECK(c.gain_at(20.0, kFs) >= 0.95);
    CHECK(c.gain_at(5.0, kFs) >= 0.99);
}

TEST_CASE("filtering is linear") {
    auto x = testutil::random_samples(2000, 11);
    auto y = testutil::random_samples(2000, 22);
    const double a = 1.7, b = -0.6;
    std::vector<double> combo(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) combo[i] = a * x[i] + b * y[i];

    FilterSpec spec = FilterSpec::lowpass(6, 80.0);
    Signal fx = butterworth_filter(Signal{x, kFs}, spec);
    Signal fy = butterworth_filter(Signal{y, kFs}, spec);
    Signal fc = butterworth_filter(Signal{combo, kFs}, spec);

    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double expect = a * fx.samples[i] + b * fy.samples[i];
        double denom = std::max(std::fabs(expect), 1e-9);
        worst = std::max(worst, std::fabs(fc.samples[i] - expect) / denom);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("output length equals input length") {
    auto x = testutil::random_samples(513, 5);
    Signal out = butterworth_filter(Signal{x, kFs}, FilterSpec::lowpass(6, 80.0));
    CHECK(out.size() == x.size());
}

TEST_CASE("invalid designs are rejected") {
    CHECK_THROWS_AS(design_butterworth(FilterSpec::lowpass(6, 440.0), kFs), DesignError);
    CHECK_THROWS_AS(design_butterworth(FilterSpec::lowpass(6, 500.0), kFs), DesignError);
    CHECK_THROWS_AS(design_butterworth(FilterSpec::lowpass(0, 80.0), kFs), DesignError);
    CHECK_THROWS_AS(design_butterworth(FilterSpec::bandstop(6, 60.0, 50.0), kFs), DesignError);
}

TEST_CASE("cascade sections are individually stable") {
    for (const Biquad& s : bandstop5060().sections()) {
        // poles of z^2 + a1 z + a2 inside the unit circle
        CHECK(std::fabs(s.a2) < 1.0);
        CHECK(std::fabs(s.a1) < 1.0 + s.a2);
    }
}
