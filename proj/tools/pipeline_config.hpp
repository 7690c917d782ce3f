#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "footfall/detect.hpp"
#include "footfall/filter.hpp"

namespace footfall::cli {

struct LowpassConfig {
    bool enabled = true;
    int order = 6;
    double cutoff_hz = 80.0;
};

struct BandstopConfig {
    bool enabled = true;
    int order = 6;
    double low_hz = 50.0;
    double high_hz = 60.0;
    double stop_attenuation_db = 60.0;
};

struct ClassifierConfig {
    std::string type = "svm"; // svm | ann
    std::string kernel = "rbf";
    double c = 1.0;
    double gamma = 0.0; // 0 = automatic
    double coef0 = 0.0;
    double tolerance = 1e-3;
    long max_steps = 100000;
    int epochs = 300;
    int batch_size = 32;
    double learning_rate = 5e-4;
    int folds = 10;
};

// One JSON document drives every stage; defaults carry the deployment
// constants (880 Hz rate, 80 Hz cutoff, 50-60 Hz stopband, 66/190/312-sample
// event lengths, 10 folds).
struct PipelineConfig {
    double sample_rate_hz = kDefaultSampleRateHz;
    LowpassConfig lowpass;
    BandstopConfig bandstop;
    DetectorConfig detector;
    std::string reference_pattern; // path; empty selects the canonical template
    ClassifierConfig classifier;
    std::uint64_t seed = 42;

    void validate() const; // throws ConfigError with the offending field

    std::string to_json() const; // all defaults made explicit
    static PipelineConfig from_json(const std::string& text);
    static PipelineConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    FilterSpec lowpass_spec() const;
    FilterSpec bandstop_spec() const;
};

} // namespace footfall::cli
