#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "footfall/signal.hpp"

namespace footfall {

enum class DetectorMethod { sta_lta, mer, ccw };

std::string_view to_string(DetectorMethod m);
DetectorMethod detector_method_from_string(std::string_view s);

// Window lengths are in samples. `short_len`/`long_len` drive STA/LTA (s
// leading, l trailing) and CCW (s central, l per flank); `window_len` is the
// MER half-window L. `event_len` is the fixed extraction length; an even
// value is treated as 2*floor(event_len/2)+1 so the window is symmetric
// around the point of interest.
struct DetectorConfig {
    DetectorMethod method = DetectorMethod::sta_lta;
    int short_len = 64;
    int long_len = 320;
    int window_len = 190;
    double threshold = 2.0;
    double epsilon = 1e-12;
    int bias = 0;
    int event_len = 190;
    int min_len = 66;
    int max_len = 312;

    int event_half() const { return event_len / 2; }
    int effective_event_len() const { return 2 * (event_len / 2) + 1; }

    void validate() const; // throws ConfigError
    static DetectorConfig defaults_for(DetectorMethod m);
};

// Ratio trace over the whole signal; indices outside [first_valid,
// last_valid] hold zeros.
struct RatioSeries {
    std::vector<double> values;
    std::size_t first_valid = 0;
    std::size_t last_valid = 0;
};

struct DetectedSegment {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    DetectorMethod method = DetectorMethod::sta_lta;

    std::size_t length() const { return end_index - start_index + 1; }
};

// Fixed-length window cut around the bias-adjusted segment midpoint.
struct ExtractedEvent {
    std::vector<double> samples;
    std::size_t poi = 0;
    DetectedSegment source_segment;
};

// er[n] = mean energy of [n-s, n) over mean energy of [n, n+l), guarded by
// epsilon in the denominator.
RatioSeries sta_lta(const Signal& sig, const DetectorConfig& cfg);

// mer[i] = (er[i] * |x[i]|)^3 with er[i] = sum [i, i+L] over sum [i-L, i].
RatioSeries mer(const Signal& sig, const DetectorConfig& cfg);

// er_ccw[n] = central short-window mean energy over the sum of the two
// flanking long-window mean energies.
RatioSeries ccw(const Signal& sig, const DetectorConfig& cfg);

// Dispatch on cfg.method.
RatioSeries compute_ratio(const Signal& sig, const DetectorConfig& cfg);

// Upward-then-downward threshold crossing pairs; a trace that starts or ends
// above threshold contributes no unterminated segment.
std::vector<DetectedSegment> threshold_segments(const RatioSeries& rs, const DetectorConfig& cfg);

// Keeps segments whose length lies in [min_len, max_len].
std::vector<DetectedSegment> gate_by_length(const std::vector<DetectedSegment>& segs,
                                            const DetectorConfig& cfg);

// PoI = floor((start+end)/2); window = PoI + bias +/- floor(event_len/2),
// inclusive. Throws BoundaryError when the window leaves the signal.
ExtractedEvent extract_event(const Signal& sig, const DetectedSegment& seg,
                             const DetectorConfig& cfg);

struct BenchResult {
    DetectorMethod method = DetectorMethod::sta_lta;
    int detected = 0;
    int missed = 0;
    int merged = 0;
    double exec_time_ms = 0.0;
};

struct BenchReport {
    std::vector<BenchResult> results;

    std::string to_json() const;
    std::string to_csv() const;
};

// Match counts between detected segments and ground-truth event centers.
// A segment matches a center when |PoI - center| <= tol_samples. detected =
// centers matched by exactly one segment; missed = centers matched by none;
// merged = segments whose [start, end] span covers two or more centers.
struct MatchCounts {
    int detected = 0;
    int missed = 0;
    int merged = 0;
    int false_alarms = 0;

    double f1() const;
};

MatchCounts match_segments(const std::vector<DetectedSegment>& segs,
                           const std::vector<std::size_t>& truth_centers,
                           std::size_t tol_samples);

// Runs each configured detector against the ground truth; timings cover the
// ratio computation only (median of `timing_reps` runs).
BenchReport run_detector_benchmark(const Signal& sig,
                                   const std::vector<std::size_t>& truth_centers,
                                   const std::vector<DetectorConfig>& configs,
                                   int timing_reps = 20);

} // namespace footfall
