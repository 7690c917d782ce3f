#include "footfall/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace footfall {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json scaler_to_json(const Scaler& sc) {
    return json{{"mean", sc.mean}, {"stddev", sc.stddev}};
}

Scaler scaler_from_json(const json& j) {
    Scaler sc;
    sc.mean = j.at("mean").get<std::vector<double>>();
    sc.stddev = j.at("stddev").get<std::vector<double>>();
    return sc;
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

} // namespace

void save_model(const SvmModel& model, const std::filesystem::path& path) {
    json j;
    j["format_version"] = kFormatVersion;
    j["model_type"] = "svm";
    j["kernel"] = {{"type", std::string(to_string(model.kernel.type))},
                   {"gamma", model.kernel.gamma},
                   {"coef0", model.kernel.coef0}};
    j["c"] = model.c;
    j["bias"] = model.bias;
    j["support_vectors"] = model.support_vectors;
    j["dual_coefs"] = model.dual_coefs;
    j["scaler"] = scaler_to_json(model.scaler);
    write_json(j, path);
}

void save_model(const AnnModel& model, const std::filesystem::path& path) {
    json j;
    j["format_version"] = kFormatVersion;
    j["model_type"] = "ann";
    j["layer_sizes"] = model.layer_sizes;
    j["weights"] = model.weights;
    j["biases"] = model.biases;
    j["bn_epsilon"] = model.bn_epsilon;
    json bns = json::array();
    for (const auto& bn : model.batch_norm) {
        if (!bn) {
            bns.push_back(nullptr);
        } else {
            bns.push_back(json{{"gamma", bn->gamma},
                               {"beta", bn->beta},
                               {"running_mean", bn->running_mean},
                               {"running_var", bn->running_var}});
        }
    }
    j["batch_norm"] = bns;
    j["scaler"] = scaler_to_json(model.scaler);
    j["epoch_losses"] = model.epoch_losses;
    write_json(j, path);
}

AnyModel load_model(const std::filesystem::path& path) {
    json j = read_json(path);
    try {
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw ParseError(path.string() + ": unsupported format version");
        const std::string type = j.at("model_type").get<std::string>();
        if (type == "svm") {
            SvmModel m;
            m.kernel.type = kernel_type_from_string(j.at("kernel").at("type").get<std::string>());
            m.kernel.gamma = j.at("kernel").at("gamma").get<double>();
            m.kernel.coef0 = j.at("kernel").at("coef0").get<double>();
            m.c = j.at("c").get<double>();
            m.bias = j.at("bias").get<double>();
            m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
            m.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
            m.scaler = scaler_from_json(j.at("scaler"));
            if (m.support_vectors.size() != m.dual_coefs.size())
                throw ParseError(path.string() + ": support vector/coefficient count mismatch");
            return m;
        }
        if (type == "ann") {
            AnnModel m;
            m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
            m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
            m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
            m.bn_epsilon = j.at("bn_epsilon").get<double>();
            for (const auto& bj : j.at("batch_norm")) {
                if (bj.is_null()) {
                    m.batch_norm.push_back(std::nullopt);
                } else {
                    BatchNormParams bn;
                    bn.gamma = bj.at("gamma").get<std::vector<double>>();
                    bn.beta = bj.at("beta").get<std::vector<double>>();
                    bn.running_mean = bj.at("running_mean").get<std::vector<double>>();
                    bn.running_var = bj.at("running_var").get<std::vector<double>>();
                    m.batch_norm.push_back(std::move(bn));
                }
            }
            m.scaler = scaler_from_json(j.at("scaler"));
            if (j.contains("epoch_losses"))
                m.epoch_losses = j.at("epoch_losses").get<std::vector<double>>();
            return m;
        }
        throw ParseError(path.string() + ": unknown model type '" + type + "'");
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

ScoreFn make_score_fn(const AnyModel& model) {
    if (std::holds_alternative<SvmModel>(model)) {
        const SvmModel m = std::get<SvmModel>(model);
        return [m](const std::vector<double>& x) { return m.decision_value(x); };
    }
    const AnnModel m = std::get<AnnModel>(model);
    return [m](const std::vector<double>& x) { return m.predict_probability(x); };
}

std::function<int(const std::vector<double>&)> make_label_fn(const AnyModel& model) {
    if (std::holds_alternative<SvmModel>(model)) {
        const SvmModel m = std::get<SvmModel>(model);
        return [m](const std::vector<double>& x) { return m.predict_label(x); };
    }
    const AnnModel m = std::get<AnnModel>(model);
    return [m](const std::vector<double>& x) { return m.predict_label(x); };
}

const Scaler& model_scaler(const AnyModel& model) {
    if (std::holds_alternative<SvmModel>(model)) return std::get<SvmModel>(model).scaler;
    return std::get<AnnModel>(model).scaler;
}

} // namespace footfall
