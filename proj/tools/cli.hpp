#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "footfall/cross_validation.hpp"
#include "footfall/detect.hpp"
#include "pipeline_config.hpp"

namespace footfall::cli {

// 0 success, 2 configuration/usage errors, 3 I/O and parse errors,
// 4 numerical failures.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kIoError = 3,
    kNumericError = 4,
};

int run_cli(const std::vector<std::string>& args);

// Packed events file: segment bounds, PoI and the fixed-length window per row.
struct EventRecord {
    DetectedSegment segment;
    std::size_t poi = 0;
    std::vector<double> samples;
};

void write_events_csv(const std::vector<EventRecord>& events, const std::filesystem::path& path);
std::vector<EventRecord> read_events_csv(const std::filesystem::path& path);

// Classifier factory used by both `train` and cross validation; standardizes
// its training split internally.
Trainer make_trainer(const ClassifierConfig& cc, std::uint64_t seed);

} // namespace footfall::cli
