#pragma once

#include <filesystem>
#include <string>

#include "footfall/signal.hpp"

namespace footfall {

enum class SignalFormat { csv, wav };

// Guess the format from the file extension; throws ConfigError on anything
// other than .csv/.wav.
SignalFormat signal_format_from_path(const std::filesystem::path& path);

// CSV: one amplitude per line; an optional leading index column is detected
// from the column count and a non-numeric header line is skipped. WAV: mono
// PCM (8/16/24-bit), integer samples scaled to [-1, 1]; the stated rate
// overrides the header rate when positive, otherwise the header rate is used.
Signal load_signal(const std::filesystem::path& path, SignalFormat format,
                   double sample_rate_hz = kDefaultSampleRateHz);

void write_signal_csv(const Signal& sig, const std::filesystem::path& path);

// 16-bit mono PCM; samples are clamped to [-1, 1].
void write_signal_wav16(const Signal& sig, const std::filesystem::path& path);

} // namespace footfall
