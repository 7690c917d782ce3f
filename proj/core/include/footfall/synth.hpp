#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "footfall/dataset.hpp"
#include "footfall/detect.hpp"
#include "footfall/features.hpp"
#include "footfall/signal.hpp"

namespace footfall {

enum class EnvelopeKind { gaussian, hann };

std::string_view to_string(EnvelopeKind e);
EnvelopeKind envelope_from_string(std::string_view s);

// Envelope-modulated oscillation; the gaussian width is set so the envelope
// is 20 dB down at the window edges. `front_rear_pair` adds a smaller
// trailing pulse behind the main one.
struct PulseSpec {
    double dominant_freq_hz = 20.0;
    int duration_samples = 190;
    EnvelopeKind envelope = EnvelopeKind::gaussian;
    double amplitude = 1.0;
    bool front_rear_pair = false;
};

struct PulsePlacement {
    std::size_t center_index = 0;
    PulseSpec pulse;
    int label = +1;
    std::string class_name = "elephant";
};

struct SceneSpec {
    double duration_s = 5.2;
    double sample_rate_hz = kDefaultSampleRateHz;
    double noise_sigma = 0.0;
    double tone_freq_hz = 55.0;
    double tone_amplitude = 0.0;
    std::uint64_t seed = 0;
    bool allow_overlap = false;
    std::vector<PulsePlacement> placements;

    std::size_t sample_count() const;
};

struct GroundTruthEvent {
    std::size_t center = 0;
    int label = +1;
    std::string class_name;
    PulseSpec pulse;
};

struct GroundTruth {
    std::vector<GroundTruthEvent> events;

    std::vector<std::size_t> centers() const;
    std::vector<std::size_t> centers_with_label(int label) const;
};

// Deterministic per (spec, rate, seed); the seed drives the oscillation
// phase so placed pulses vary realistically.
std::vector<double> gen_pulse(const PulseSpec& spec, double sample_rate_hz, std::uint64_t seed);

// Fixed cosine phase, peak exactly at the window center; this is the shipped
// stand-in for a field-verified footfall template.
ReferencePattern canonical_reference(int length_samples,
                                     double sample_rate_hz = kDefaultSampleRateHz,
                                     double dominant_freq_hz = 20.0);

// Sum of placed pulses + white noise + optional tone. Placements must stay
// in bounds and (unless allow_overlap) must not intersect. Elephant-labeled
// pulses are checked against the footfall length gate [66, 312].
std::pair<Signal, GroundTruth> gen_scene(const SceneSpec& spec);

// Evenly spaced centers with jittered offsets, leaving `margin` samples free
// at both ends.
std::vector<PulsePlacement> place_uniform(const PulseSpec& pulse, int count,
                                          std::size_t scene_samples, int label,
                                          const std::string& class_name, std::uint64_t seed,
                                          std::size_t margin = 260, double jitter = 0.1);

struct ClassSpec {
    std::string name;
    int label = +1;
    PulseSpec pulse;
};

struct DatasetGenOptions {
    // white-noise sigma as a fraction of the class pulse amplitude; raising
    // it makes the generated classification problem harder
    double noise_sigma_rel = 0.02;
    int pulses_per_scene = 25;
};

// Runs the full detect -> gate -> extract -> featurize pipeline over
// generated single-class scenes and labels rows from the ground truth.
// Throws ShortfallError when detection yields fewer events than requested.
Dataset gen_labeled_dataset(int n_per_class, const std::vector<ClassSpec>& classes,
                            double sample_rate_hz, std::uint64_t seed,
                            const DatasetGenOptions& options = {});

// Grid value maximizing event-level F1 (PoI within +/- floor(event_len/2) of
// a truth center) over the given scenes, using gated segments.
double calibrate_threshold(const DetectorConfig& cfg,
                           const std::vector<std::pair<Signal, GroundTruth>>& scenes,
                           const std::vector<double>& grid);

// The evaluation scene shape: 5.2 s, ten elephant pulses, 20 dB SNR.
SceneSpec default_scene_spec(std::uint64_t seed);

std::string scene_spec_to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const std::string& text);
SceneSpec load_scene_spec(const std::filesystem::path& path);

std::vector<ClassSpec> class_specs_from_json(const std::string& text);
std::vector<ClassSpec> load_class_specs(const std::filesystem::path& path);
// The shipped pair: an elephant footfall class and a frequency-overlapping
// "wet soil cattle" confuser.
std::vector<ClassSpec> default_class_specs();

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth load_ground_truth(const std::filesystem::path& path);

} // namespace footfall
