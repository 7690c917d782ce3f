#include "footfall/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

namespace footfall {

namespace {

using nlohmann::json;

// footfall length gate at the default rate, in samples
constexpr int kElephantMinSamples = 66;
constexpr int kElephantMaxSamples = 312;

// gaussian width for a 20 dB-down envelope at +/- extent/2
double gaussian_sigma(double extent_samples) {
    return 0.5 * extent_samples / std::sqrt(2.0 * std::numbers::ln10);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 step
    std::uint64_t z = seed + salt * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void validate_pulse(const PulseSpec& spec, double sample_rate_hz) {
    if (spec.duration_samples < 4) throw ConfigError("pulse duration must be >= 4 samples");
    if (spec.amplitude <= 0.0) throw ConfigError("pulse amplitude must be positive");
    if (spec.dominant_freq_hz <= 0.0 || spec.dominant_freq_hz >= 0.5 * sample_rate_hz)
        throw ConfigError("pulse dominant frequency must lie inside (0, Nyquist)");
}

std::vector<double> gen_pulse_with_phase(const PulseSpec& spec, double sample_rate_hz,
                                         double phase) {
    validate_pulse(spec, sample_rate_hz);
    const int d = spec.duration_samples;
    const double center = 0.5 * (d - 1);
    std::vector<double> env(d, 0.0);

    if (spec.envelope == EnvelopeKind::gaussian) {
        const double sigma = gaussian_sigma(d);
        for (int k = 0; k < d; ++k) {
            double t = (k - center) / sigma;
            env[k] = std::exp(-0.5 * t * t);
        }
    } else {
        for (int k = 0; k < d; ++k)
            env[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / (d - 1)));
    }

    if (spec.front_rear_pair) {
        // smaller trailing pulse behind the main one
        const double rear_center = 0.85 * (d - 1);
        const double rear_sigma = gaussian_sigma(0.3 * d);
        for (int k = 0; k < d; ++k) {
            double t = (k - rear_center) / rear_sigma;
            env[k] += 0.45 * std::exp(-0.5 * t * t);
        }
    }

    std::vector<double> out(d);
    const double w = 2.0 * std::numbers::pi * spec.dominant_freq_hz / sample_rate_hz;
    for (int k = 0; k < d; ++k)
        out[k] = spec.amplitude * env[k] * std::sin(w * (k - center) + phase);
    return out;
}

} // namespace

std::string_view to_string(EnvelopeKind e) {
    return e == EnvelopeKind::gaussian ? "gaussian" : "hann";
}

EnvelopeKind envelope_from_string(std::string_view s) {
    if (s == "gaussian") return EnvelopeKind::gaussian;
    if (s == "hann") return EnvelopeKind::hann;
    throw ConfigError("unknown envelope '" + std::string(s) + "'");
}

std::size_t SceneSpec::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

std::vector<std::size_t> GroundTruth::centers() const {
    std::vector<std::size_t> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.center);
    return out;
}

std::vector<std::size_t> GroundTruth::centers_with_label(int label) const {
    std::vector<std::size_t> out;
    for (const auto& e : events)
        if (e.label == label) out.push_back(e.center);
    return out;
}

std::vector<double> gen_pulse(const PulseSpec& spec, double sample_rate_hz, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0x9a7b));
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    return gen_pulse_with_phase(spec, sample_rate_hz, u(rng));
}

ReferencePattern canonical_reference(int length_samples, double sample_rate_hz,
                                     double dominant_freq_hz) {
    PulseSpec spec;
    spec.duration_samples = length_samples;
    spec.dominant_freq_hz = dominant_freq_hz;
    auto samples = gen_pulse_with_phase(spec, sample_rate_hz, 0.5 * std::numbers::pi);
    return ReferencePattern{normalize_amplitude(std::span<const double>(samples))};
}

std::pair<Signal, GroundTruth> gen_scene(const SceneSpec& spec) {
    const std::size_t n = spec.sample_count();
    if (n == 0) throw ConfigError("scene duration must be positive");
    if (spec.noise_sigma < 0.0) throw ConfigError("noise sigma must be >= 0");

    struct Span {
        long long first, last;
    };
    std::vector<Span> spans;
    for (const auto& p : spec.placements) {
        validate_pulse(p.pulse, spec.sample_rate_hz);
        const long long d = p.pulse.duration_samples;
        const long long first = static_cast<long long>(p.center_index) - d / 2;
        const long long last = first + d - 1;
        if (first < 0 || last >= static_cast<long long>(n))
            throw ConfigError("pulse at center " + std::to_string(p.center_index) +
                              " does not fit in a scene of " + std::to_string(n) + " samples");
        if (p.label == +1 && (p.pulse.duration_samples < kElephantMinSamples ||
                              p.pulse.duration_samples > kElephantMaxSamples))
            throw ConfigError("elephant-class pulse duration " +
                              std::to_string(p.pulse.duration_samples) +
                              " outside the footfall gate [" +
                              std::to_string(kElephantMinSamples) + ", " +
                              std::to_string(kElephantMaxSamples) + "]");
        spans.push_back({first, last});
    }
    if (!spec.allow_overlap) {
        auto sorted = spans;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Span& a, const Span& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i].first <= sorted[i - 1].last)
                throw ConfigError("overlapping pulse placements (set allow_overlap to permit)");
    }

    Signal sig;
    sig.sample_rate_hz = spec.sample_rate_hz;
    sig.samples.assign(n, 0.0);

    for (std::size_t pi = 0; pi < spec.placements.size(); ++pi) {
        const auto& p = spec.placements[pi];
        auto pulse = gen_pulse(p.pulse, spec.sample_rate_hz, mix_seed(spec.seed, pi + 1));
        const long long first = spans[pi].first;
        for (std::size_t k = 0; k < pulse.size(); ++k)
            sig.samples[static_cast<std::size_t>(first) + k] += pulse[k];
    }

    if (spec.noise_sigma > 0.0) {
        std::mt19937_64 rng(mix_seed(spec.seed, 0x7015e));
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (double& v : sig.samples) v += noise(rng);
    }

    if (spec.tone_amplitude > 0.0) {
        const double w = 2.0 * std::numbers::pi * spec.tone_freq_hz / spec.sample_rate_hz;
        for (std::size_t i = 0; i < n; ++i)
            sig.samples[i] += spec.tone_amplitude * std::sin(w * static_cast<double>(i));
    }

    GroundTruth truth;
    for (const auto& p : spec.placements)
        truth.events.push_back({p.center_index, p.label, p.class_name, p.pulse});
    std::sort(truth.events.begin(), truth.events.end(),
              [](const GroundTruthEvent& a, const GroundTruthEvent& b) {
                  return a.center < b.center;
              });
    for (std::size_t i = 1; i < truth.events.size(); ++i)
        if (truth.events[i].center == truth.events[i - 1].center)
            throw ConfigError("duplicate ground-truth centers");
    return {std::move(sig), std::move(truth)};
}

std::vector<PulsePlacement> place_uniform(const PulseSpec& pulse, int count,
                                          std::size_t scene_samples, int label,
                                          const std::string& class_name, std::uint64_t seed,
                                          std::size_t margin, double jitter) {
    if (count < 1) throw ConfigError("placement count must be >= 1");
    if (scene_samples <= 2 * margin)
        throw ConfigError("scene too short for the requested margins");
    const double span = static_cast<double>(scene_samples - 2 * margin);
    const double spacing = span / count;
    if (spacing < static_cast<double>(pulse.duration_samples))
        throw ConfigError("scene too short for " + std::to_string(count) + " pulses");

    std::mt19937_64 rng(mix_seed(seed, 0x91ace));
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<PulsePlacement> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        double center = static_cast<double>(margin) + (i + 0.5) * spacing +
                        jitter * spacing * u(rng);
        PulsePlacement p;
        p.center_index = static_cast<std::size_t>(std::llround(center));
        p.pulse = pulse;
        p.label = label;
        p.class_name = class_name;
        out.push_back(std::move(p));
    }
    return out;
}

double calibrate_threshold(const DetectorConfig& cfg,
                           const std::vector<std::pair<Signal, GroundTruth>>& scenes,
                           const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("calibration grid is empty");
    if (scenes.empty()) throw ConfigError("calibration needs at least one scene");

    std::vector<RatioSeries> ratios;
    ratios.reserve(scenes.size());
    for (const auto& [sig, truth] : scenes) ratios.push_back(compute_ratio(sig, cfg));

    std::vector<double> f1_per_threshold;
    f1_per_threshold.reserve(grid.size());
    for (double th : grid) {
        DetectorConfig c = cfg;
        c.threshold = th;
        MatchCounts total;
        for (std::size_t si = 0; si < scenes.size(); ++si) {
            auto segs = gate_by_length(threshold_segments(ratios[si], c), c);
            MatchCounts mc = match_segments(segs, scenes[si].second.centers(),
                                            static_cast<std::size_t>(c.event_half()));
            total.detected += mc.detected;
            total.missed += mc.missed;
            total.merged += mc.merged;
            total.false_alarms += mc.false_alarms;
        }
        f1_per_threshold.push_back(total.f1());
    }
    // several grid points often tie at the best F1; take the middle of the
    // tied set so the pick keeps margin on both sides
    double best_f1 = f1_per_threshold.front();
    for (double f : f1_per_threshold) best_f1 = std::max(best_f1, f);
    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (f1_per_threshold[i] == best_f1) winners.push_back(i);
    return grid[winners[winners.size() / 2]];
}

Dataset gen_labeled_dataset(int n_per_class, const std::vector<ClassSpec>& classes,
                            double sample_rate_hz, std::uint64_t seed,
                            const DatasetGenOptions& options) {
    if (n_per_class < 1) throw ConfigError("n_per_class must be >= 1");
    if (classes.empty()) throw ConfigError("no class specs given");
    if (options.noise_sigma_rel < 0.0 || options.pulses_per_scene < 1)
        throw ConfigError("invalid dataset generation options");

    DetectorConfig cfg = DetectorConfig::defaults_for(DetectorMethod::sta_lta);
    ReferencePattern ref =
        canonical_reference(cfg.effective_event_len(), sample_rate_hz);

    const int pulses_per_scene = options.pulses_per_scene;
    constexpr std::size_t kMargin = 600;
    constexpr double kSpacing = 700.0;

    Dataset ds;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        const ClassSpec& cls = classes[ci];
        const int want_pulses = n_per_class + std::max(4, n_per_class / 4);
        const int n_scenes = (want_pulses + pulses_per_scene - 1) / pulses_per_scene;

        std::vector<std::pair<Signal, GroundTruth>> scenes;
        for (int si = 0; si < n_scenes; ++si) {
            SceneSpec spec;
            spec.sample_rate_hz = sample_rate_hz;
            const std::size_t samples =
                2 * kMargin + static_cast<std::size_t>(kSpacing * pulses_per_scene);
            spec.duration_s = static_cast<double>(samples) / sample_rate_hz;
            spec.noise_sigma = options.noise_sigma_rel * cls.pulse.amplitude;
            spec.seed = mix_seed(seed, (ci << 16) + si);
            spec.placements = place_uniform(cls.pulse, pulses_per_scene, samples, cls.label,
                                            cls.name, spec.seed, kMargin, 0.1);
            scenes.push_back(gen_scene(spec));
        }

        std::vector<double> grid;
        for (double t = 0.75; t <= 48.0; t *= 1.5) grid.push_back(t);
        DetectorConfig tuned = cfg;
        tuned.threshold = calibrate_threshold(cfg, {scenes.front()}, grid);

        int collected = 0;
        for (const auto& [sig, truth] : scenes) {
            if (collected >= n_per_class) break;
            auto segs = gate_by_length(threshold_segments(compute_ratio(sig, tuned), tuned), tuned);
            auto centers = truth.centers();
            for (const auto& seg : segs) {
                if (collected >= n_per_class) break;
                ExtractedEvent ev;
                try {
                    ev = extract_event(sig, seg, tuned);
                } catch (const BoundaryError&) {
                    continue;
                }
                // keep only events matching exactly one truth center
                int matches = 0;
                for (std::size_t c : centers) {
                    long long d = static_cast<long long>(ev.poi) - static_cast<long long>(c);
                    if (std::llabs(d) <= cfg.event_half()) ++matches;
                }
                if (matches != 1) continue;
                DataRow row;
                try {
                    row.features = feature_row(
                        extract_features(ev, seg, ref, sample_rate_hz));
                } catch (const DegenerateInputError&) {
                    continue;
                }
                row.label = cls.label;
                row.provenance = cls.name;
                ds.rows.push_back(std::move(row));
                ++collected;
            }
        }
        if (collected < n_per_class)
            throw ShortfallError("class '" + cls.name + "' yielded " +
                                 std::to_string(collected) + " of " +
                                 std::to_string(n_per_class) + " requested events");
    }
    return ds;
}

SceneSpec default_scene_spec(std::uint64_t seed) {
    SceneSpec spec;
    spec.duration_s = 5.2;
    spec.sample_rate_hz = kDefaultSampleRateHz;
    spec.noise_sigma = 0.1; // 20 dB below the unit pulse peak
    spec.tone_amplitude = 0.0;
    spec.seed = seed;
    PulseSpec pulse;
    spec.placements = place_uniform(pulse, 10, spec.sample_count(), +1, "elephant", seed);
    return spec;
}

namespace {

json pulse_to_json(const PulseSpec& p) {
    return json{{"dominant_freq_hz", p.dominant_freq_hz},
                {"duration_samples", p.duration_samples},
                {"envelope", std::string(to_string(p.envelope))},
                {"amplitude", p.amplitude},
                {"front_rear_pair", p.front_rear_pair}};
}

PulseSpec pulse_from_json(const json& j) {
    PulseSpec p;
    p.dominant_freq_hz = j.value("dominant_freq_hz", p.dominant_freq_hz);
    p.duration_samples = j.value("duration_samples", p.duration_samples);
    if (j.contains("envelope")) p.envelope = envelope_from_string(j.at("envelope").get<std::string>());
    p.amplitude = j.value("amplitude", p.amplitude);
    p.front_rear_pair = j.value("front_rear_pair", p.front_rear_pair);
    return p;
}

} // namespace

std::string scene_spec_to_json(const SceneSpec& spec) {
    json j;
    j["duration_s"] = spec.duration_s;
    j["sample_rate_hz"] = spec.sample_rate_hz;
    j["noise_sigma"] = spec.noise_sigma;
    j["tone"] = {{"freq_hz", spec.tone_freq_hz}, {"amplitude", spec.tone_amplitude}};
    j["seed"] = spec.seed;
    j["allow_overlap"] = spec.allow_overlap;
    json placements = json::array();
    for (const auto& p : spec.placements)
        placements.push_back(json{{"center_index", p.center_index},
                                  {"label", p.label},
                                  {"class_name", p.class_name},
                                  {"pulse", pulse_to_json(p.pulse)}});
    j["placements"] = placements;
    return j.dump(2) + "\n";
}

SceneSpec scene_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scene spec: ") + e.what());
    }
    try {
        SceneSpec spec;
        spec.duration_s = j.value("duration_s", spec.duration_s);
        spec.sample_rate_hz = j.value("sample_rate_hz", spec.sample_rate_hz);
        spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
        if (j.contains("tone")) {
            spec.tone_freq_hz = j["tone"].value("freq_hz", spec.tone_freq_hz);
            spec.tone_amplitude = j["tone"].value("amplitude", spec.tone_amplitude);
        }
        spec.seed = j.value("seed", spec.seed);
        spec.allow_overlap = j.value("allow_overlap", spec.allow_overlap);
        for (const auto& pj : j.value("placements", json::array())) {
            PulsePlacement p;
            p.center_index = pj.at("center_index").get<std::size_t>();
            p.label = pj.value("label", +1);
            p.class_name = pj.value("class_name", std::string("elephant"));
            if (pj.contains("pulse")) p.pulse = pulse_from_json(pj.at("pulse"));
            spec.placements.push_back(std::move(p));
        }
        // procedural placement block, resolved at parse time
        if (j.contains("uniform")) {
            const auto& u = j.at("uniform");
            PulseSpec pulse =
                u.contains("pulse") ? pulse_from_json(u.at("pulse")) : PulseSpec{};
            auto placed = place_uniform(
                pulse, u.value("count", 10), spec.sample_count(), u.value("label", +1),
                u.value("class_name", std::string("elephant")), spec.seed,
                u.value("margin", static_cast<std::size_t>(260)), u.value("jitter", 0.1));
            spec.placements.insert(spec.placements.end(), placed.begin(), placed.end());
        }
        return spec;
    } catch (const json::exception& e) {
        throw ParseError(std::string("scene spec: ") + e.what());
    }
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scene_spec_from_json(text);
}

std::vector<ClassSpec> class_specs_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("class specs: ") + e.what());
    }
    try {
        std::vector<ClassSpec> out;
        for (const auto& cj : j.at("classes")) {
            ClassSpec c;
            c.name = cj.at("name").get<std::string>();
            c.label = cj.at("label").get<int>();
            if (cj.contains("pulse")) c.pulse = pulse_from_json(cj.at("pulse"));
            out.push_back(std::move(c));
        }
        if (out.empty()) throw ParseError("class specs: no classes defined");
        return out;
    } catch (const json::exception& e) {
        throw ParseError(std::string("class specs: ") + e.what());
    }
}

std::vector<ClassSpec> load_class_specs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return class_specs_from_json(text);
}

std::vector<ClassSpec> default_class_specs() {
    ClassSpec elephant;
    elephant.name = "elephant";
    elephant.label = +1;

    // overlaps the elephant band in dominant frequency but not in duration
    // or shape, so spectral features alone cannot separate it
    ClassSpec wet_soil;
    wet_soil.name = "wet_soil_cattle";
    wet_soil.label = -1;
    wet_soil.pulse.dominant_freq_hz = 20.0;
    wet_soil.pulse.duration_samples = 80;
    wet_soil.pulse.envelope = EnvelopeKind::hann;

    return {elephant, wet_soil};
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
    json events = json::array();
    for (const auto& e : truth.events)
        events.push_back(json{{"center", e.center},
                              {"label", e.label},
                              {"class_name", e.class_name},
                              {"pulse", pulse_to_json(e.pulse)}});
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << json{{"events", events}}.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
        GroundTruth truth;
        for (const auto& ej : j.at("events")) {
            GroundTruthEvent e;
            e.center = ej.at("center").get<std::size_t>();
            e.label = ej.value("label", +1);
            e.class_name = ej.value("class_name", std::string());
            if (ej.contains("pulse")) e.pulse = pulse_from_json(ej.at("pulse"));
            truth.events.push_back(std::move(e));
        }
        return truth;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

} // namespace footfall
