#pragma once

#include <span>
#include <vector>

#include "footfall/dataset.hpp"

namespace footfall {

enum class KernelType { linear, poly3, poly6, rbf, sigmoid };

std::string_view to_string(KernelType k);
KernelType kernel_type_from_string(std::string_view s);

// gamma == 0 requests the automatic value 1 / (dim * pooled feature
// variance), resolved when training.
struct KernelSpec {
    KernelType type = KernelType::rbf;
    double gamma = 0.0;
    double coef0 = 0.0;

    int degree() const;
};

double kernel_eval(const KernelSpec& k, std::span<const double> a, std::span<const double> b);

struct SvmTrainOptions {
    KernelSpec kernel;
    double c = 1.0;
    double tolerance = 1e-3;
    long max_steps = 100000;
};

// Soft-margin SVM in the dual; support vectors live in standardized feature
// space and raw inputs are scaled on the way in.
struct SvmModel {
    KernelSpec kernel;
    double c = 1.0;
    double bias = 0.0;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefs; // alpha_i * y_i
    Scaler scaler;

    double decision_value_standardized(std::span<const double> x) const;
    double decision_value(std::span<const double> raw) const;
    // sign of the decision value; a zero score maps to +1
    int predict_label(std::span<const double> raw) const;
};

// Post-training state for KKT verification and reporting; slack values are
// derived, not stored model state.
struct SvmTrainDiagnostics {
    std::vector<double> alphas;
    long steps = 0;
    int sweeps = 0;
    double sum_alpha_y = 0.0;
    double max_kkt_violation = 0.0;
};

// SMO (working-set size 2). The dataset must be standardized and contain
// both classes. Throws ConvergenceError when the step cap is hit.
SvmModel train_svm(const Dataset& standardized, const SvmTrainOptions& opts = {},
                   SvmTrainDiagnostics* diagnostics = nullptr);

struct KktCheck {
    double max_violation = 0.0;
    long violating_points = 0;
};

// Margin residuals over every training point: alpha == 0 rows must satisfy
// y f(x) >= 1 - tol, interior rows |y f(x) - 1| <= tol, bound rows
// y f(x) <= 1 + tol.
KktCheck check_kkt(const SvmModel& model, const Dataset& standardized,
                   const std::vector<double>& alphas, double tol);

} // namespace footfall
