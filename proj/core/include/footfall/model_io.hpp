#pragma once

#include <filesystem>
#include <functional>
#include <variant>

#include "footfall/ann.hpp"
#include "footfall/svm.hpp"

namespace footfall {

// Versioned JSON documents: a kernel/architecture descriptor, flat parameter
// arrays and the attached scaler.
void save_model(const SvmModel& model, const std::filesystem::path& path);
void save_model(const AnnModel& model, const std::filesystem::path& path);

using AnyModel = std::variant<SvmModel, AnnModel>;

AnyModel load_model(const std::filesystem::path& path);

// Raw-feature scoring function: SVM decision value or ANN probability.
using ScoreFn = std::function<double(const std::vector<double>&)>;

ScoreFn make_score_fn(const AnyModel& model);
// Hard label from raw features.
std::function<int(const std::vector<double>&)> make_label_fn(const AnyModel& model);
const Scaler& model_scaler(const AnyModel& model);

} // namespace footfall
