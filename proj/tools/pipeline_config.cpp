#include "pipeline_config.hpp"

#include <fstream>

#include <json.hpp>

#include "footfall/svm.hpp"

namespace footfall::cli {

namespace {
using nlohmann::json;
}

void PipelineConfig::validate() const {
    if (sample_rate_hz <= 0.0) throw ConfigError("sample_rate_hz must be positive");
    const double nyq = 0.5 * sample_rate_hz;
    if (lowpass.enabled) {
        if (lowpass.order < 1) throw ConfigError("filters.lowpass.order must be >= 1");
        if (lowpass.cutoff_hz <= 0.0 || lowpass.cutoff_hz >= nyq)
            throw ConfigError("filters.lowpass.cutoff_hz must lie inside (0, Nyquist)");
    }
    if (bandstop.enabled) {
        if (bandstop.order < 1) throw ConfigError("filters.bandstop.order must be >= 1");
        if (bandstop.low_hz <= 0.0 || bandstop.high_hz >= nyq ||
            bandstop.low_hz >= bandstop.high_hz)
            throw ConfigError("filters.bandstop edges must satisfy 0 < low < high < Nyquist");
        if (bandstop.stop_attenuation_db <= 0.0)
            throw ConfigError("filters.bandstop.stop_attenuation_db must be positive");
    }
    detector.validate();
    if (classifier.type != "svm" && classifier.type != "ann")
        throw ConfigError("classifier.type must be 'svm' or 'ann'");
    if (classifier.type == "svm") kernel_type_from_string(classifier.kernel);
    if (classifier.c <= 0.0) throw ConfigError("classifier.c must be positive");
    if (classifier.folds < 2) throw ConfigError("classifier.folds must be >= 2");
    if (classifier.epochs < 1) throw ConfigError("classifier.epochs must be >= 1");
    if (classifier.batch_size < 1) throw ConfigError("classifier.batch_size must be >= 1");
    if (classifier.learning_rate <= 0.0)
        throw ConfigError("classifier.learning_rate must be positive");
    if (!reference_pattern.empty() && !std::filesystem::exists(reference_pattern))
        throw ConfigError("reference_pattern file does not exist: " + reference_pattern);
}

std::string PipelineConfig::to_json() const {
    json j;
    j["sample_rate_hz"] = sample_rate_hz;
    j["filters"] = {
        {"lowpass",
         {{"enabled", lowpass.enabled}, {"order", lowpass.order}, {"cutoff_hz", lowpass.cutoff_hz}}},
        {"bandstop",
         {{"enabled", bandstop.enabled},
          {"order", bandstop.order},
          {"low_hz", bandstop.low_hz},
          {"high_hz", bandstop.high_hz},
          {"stop_attenuation_db", bandstop.stop_attenuation_db}}}};
    j["detector"] = {{"method", std::string(to_string(detector.method))},
                     {"short_len", detector.short_len},
                     {"long_len", detector.long_len},
                     {"window_len", detector.window_len},
                     {"threshold", detector.threshold},
                     {"epsilon", detector.epsilon},
                     {"bias", detector.bias},
                     {"event_len", detector.event_len},
                     {"min_len", detector.min_len},
                     {"max_len", detector.max_len}};
    j["reference_pattern"] = reference_pattern;
    j["classifier"] = {{"type", classifier.type},
                       {"kernel", classifier.kernel},
                       {"c", classifier.c},
                       {"gamma", classifier.gamma},
                       {"coef0", classifier.coef0},
                       {"tolerance", classifier.tolerance},
                       {"max_steps", classifier.max_steps},
                       {"epochs", classifier.epochs},
                       {"batch_size", classifier.batch_size},
                       {"learning_rate", classifier.learning_rate},
                       {"folds", classifier.folds}};
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    try {
        PipelineConfig cfg;
        cfg.sample_rate_hz = j.value("sample_rate_hz", cfg.sample_rate_hz);
        if (j.contains("filters")) {
            const auto& f = j["filters"];
            if (f.contains("lowpass")) {
                const auto& lp = f["lowpass"];
                cfg.lowpass.enabled = lp.value("enabled", cfg.lowpass.enabled);
                cfg.lowpass.order = lp.value("order", cfg.lowpass.order);
                cfg.lowpass.cutoff_hz = lp.value("cutoff_hz", cfg.lowpass.cutoff_hz);
            }
            if (f.contains("bandstop")) {
                const auto& bs = f["bandstop"];
                cfg.bandstop.enabled = bs.value("enabled", cfg.bandstop.enabled);
                cfg.bandstop.order = bs.value("order", cfg.bandstop.order);
                cfg.bandstop.low_hz = bs.value("low_hz", cfg.bandstop.low_hz);
                cfg.bandstop.high_hz = bs.value("high_hz", cfg.bandstop.high_hz);
                cfg.bandstop.stop_attenuation_db =
                    bs.value("stop_attenuation_db", cfg.bandstop.stop_attenuation_db);
            }
        }
        if (j.contains("detector")) {
            const auto& d = j["detector"];
            if (d.contains("method"))
                cfg.detector.method = detector_method_from_string(d["method"].get<std::string>());
            cfg.detector.short_len = d.value("short_len", cfg.detector.short_len);
            cfg.detector.long_len = d.value("long_len", cfg.detector.long_len);
            cfg.detector.window_len = d.value("window_len", cfg.detector.window_len);
            cfg.detector.threshold = d.value("threshold", cfg.detector.threshold);
            cfg.detector.epsilon = d.value("epsilon", cfg.detector.epsilon);
            cfg.detector.bias = d.value("bias", cfg.detector.bias);
            cfg.detector.event_len = d.value("event_len", cfg.detector.event_len);
            cfg.detector.min_len = d.value("min_len", cfg.detector.min_len);
            cfg.detector.max_len = d.value("max_len", cfg.detector.max_len);
        }
        cfg.reference_pattern = j.value("reference_pattern", cfg.reference_pattern);
        if (j.contains("classifier")) {
            const auto& c = j["classifier"];
            cfg.classifier.type = c.value("type", cfg.classifier.type);
            cfg.classifier.kernel = c.value("kernel", cfg.classifier.kernel);
            cfg.classifier.c = c.value("c", cfg.classifier.c);
            cfg.classifier.gamma = c.value("gamma", cfg.classifier.gamma);
            cfg.classifier.coef0 = c.value("coef0", cfg.classifier.coef0);
            cfg.classifier.tolerance = c.value("tolerance", cfg.classifier.tolerance);
            cfg.classifier.max_steps = c.value("max_steps", cfg.classifier.max_steps);
            cfg.classifier.epochs = c.value("epochs", cfg.classifier.epochs);
            cfg.classifier.batch_size = c.value("batch_size", cfg.classifier.batch_size);
            cfg.classifier.learning_rate = c.value("learning_rate", cfg.classifier.learning_rate);
            cfg.classifier.folds = c.value("folds", cfg.classifier.folds);
        }
        cfg.seed = j.value("seed", cfg.seed);
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

void PipelineConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json();
    if (!out) throw IoError("write failed: " + path.string());
}

FilterSpec PipelineConfig::lowpass_spec() const {
    return FilterSpec::lowpass(lowpass.order, lowpass.cutoff_hz);
}

FilterSpec PipelineConfig::bandstop_spec() const {
    return FilterSpec::bandstop(bandstop.order, bandstop.low_hz, bandstop.high_hz,
                                bandstop.stop_attenuation_db);
}

} // namespace footfall::cli
