#include "footfall/svm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace footfall {

std::string_view to_string(KernelType k) {
    switch (k) {
        case KernelType::linear: return "linear";
        case KernelType::poly3: return "poly3";
        case KernelType::poly6: return "poly6";
        case KernelType::rbf: return "rbf";
        case KernelType::sigmoid: return "sigmoid";
    }
    return "unknown";
}

KernelType kernel_type_from_string(std::string_view s) {
    if (s == "linear") return KernelType::linear;
    if (s == "poly3") return KernelType::poly3;
    if (s == "poly6") return KernelType::poly6;
    if (s == "rbf") return KernelType::rbf;
    if (s == "sigmoid") return KernelType::sigmoid;
    throw ConfigError("unknown kernel '" + std::string(s) + "'");
}

int KernelSpec::degree() const {
    if (type == KernelType::poly3) return 3;
    if (type == KernelType::poly6) return 6;
    return 0;
}

double kernel_eval(const KernelSpec& k, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ShapeError("kernel arguments differ in dimension: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    switch (k.type) {
        case KernelType::linear:
            return dot;
        case KernelType::poly3:
        case KernelType::poly6: {
            double base = k.gamma * dot + k.coef0;
            double p = base * base * base;
            return k.type == KernelType::poly3 ? p : p * p;
        }
        case KernelType::rbf: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                double d = a[i] - b[i];
                d2 += d * d;
            }
            return std::exp(-k.gamma * d2);
        }
        case KernelType::sigmoid:
            return std::tanh(k.gamma * dot + k.coef0);
    }
    throw ConfigError("invalid kernel type");
}

double SvmModel::decision_value_standardized(std::span<const double> x) const {
    double score = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
        score += dual_coefs[i] * kernel_eval(kernel, support_vectors[i], x);
    return score;
}

double SvmModel::decision_value(std::span<const double> raw) const {
    return decision_value_standardized(apply_scaler(raw, scaler));
}

int SvmModel::predict_label(std::span<const double> raw) const {
    return decision_value(raw) >= 0.0 ? +1 : -1;
}

namespace {

double pooled_variance(const Dataset& ds) {
    double mean = 0.0, count = 0.0;
    for (const auto& r : ds.rows)
        for (double v : r.features) {
            mean += v;
            count += 1.0;
        }
    mean /= count;
    double var = 0.0;
    for (const auto& r : ds.rows)
        for (double v : r.features) {
            double d = v - mean;
            var += d * d;
        }
    return var / count;
}

// Platt-style SMO state over a fully cached kernel matrix.
class SmoSolver {
public:
    SmoSolver(const Dataset& ds, const KernelSpec& kernel, double c, double tol, long max_steps)
        : n_(ds.rows.size()), kernel_(kernel), c_(c), tol_(tol), max_steps_(max_steps),
          rng_(0xf00df00dULL) {
        x_.reserve(n_);
        y_.reserve(n_);
        for (const auto& r : ds.rows) {
            x_.push_back(r.features);
            y_.push_back(static_cast<double>(r.label));
        }
        k_.assign(n_ * n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j) {
                double v = kernel_eval(kernel_, x_[i], x_[j]);
                k_[i * n_ + j] = v;
                k_[j * n_ + i] = v;
            }
        alpha_.assign(n_, 0.0);
        // with all alphas zero, f(x) = b = 0, so E_i = -y_i
        errors_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) errors_[i] = -y_[i];
    }

    void solve() {
        long changed = 0;
        bool examine_all = true;
        while (changed > 0 || examine_all) {
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
            } else {
                for (std::size_t i = 0; i < n_; ++i)
                    if (is_free(alpha_[i])) changed += examine(i);
            }
            if (examine_all) examine_all = false;
            else if (changed == 0) examine_all = true;
            ++sweeps_;
            if (steps_ > max_steps_)
                throw ConvergenceError("SMO failed to converge: " + std::to_string(steps_) +
                                       " steps, " + std::to_string(sweeps_) +
                                       " sweeps, max KKT violation " +
                                       std::to_string(max_violation()));
        }
    }

    double max_violation() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double r = errors_[i] * y_[i]; // y f(x) - 1
            if (alpha_[i] < c_) worst = std::max(worst, -r);
            if (alpha_[i] > 0.0) worst = std::max(worst, r);
        }
        return worst;
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double bias() const { return b_; }
    long steps() const { return steps_; }
    int sweeps() const { return sweeps_; }
    const std::vector<double>& labels() const { return y_; }
    const std::vector<std::vector<double>>& points() const { return x_; }

private:
    bool is_free(double a) const { return a > 0.0 && a < c_; }
    double k(std::size_t i, std::size_t j) const { return k_[i * n_ + j]; }

    int examine(std::size_t i2) {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double r2 = errors_[i2] * y2;
        const bool violates = (r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0.0);
        if (!violates) return 0;

        // best |E1 - E2| over free multipliers
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_free(alpha_[i])) continue;
            double gap = std::fabs(errors_[i] - errors_[i2]);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;

        std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
        std::size_t offset = pick(rng_);
        for (std::size_t t = 0; t < n_; ++t) {
            std::size_t i1 = (t + offset) % n_;
            if (is_free(alpha_[i1]) && take_step(i1, i2)) return 1;
        }
        offset = pick(rng_);
        for (std::size_t t = 0; t < n_; ++t) {
            std::size_t i1 = (t + offset) % n_;
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1_old = alpha_[i1], a2_old = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = errors_[i1], e2 = errors_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(c_, c_ + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - c_);
            hi = std::min(c_, a1_old + a2_old);
        }
        if (lo >= hi) return false;

        const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = a2_old + y2 * (e1 - e2) / eta;
            a2_new = std::clamp(a2_new, lo, hi);
        } else {
            // curvature is non-positive (duplicate points or an indefinite
            // kernel): evaluate the dual objective at both clip bounds
            auto objective = [&](double t) {
                double a1_t = a1_old + s * (a2_old - t);
                double v1 = e1 + y1 - b_ - a1_old * y1 * k11 - a2_old * y2 * k12;
                double v2 = e2 + y2 - b_ - a1_old * y1 * k12 - a2_old * y2 * k22;
                return a1_t + t - 0.5 * k11 * a1_t * a1_t - 0.5 * k22 * t * t -
                       s * k12 * a1_t * t - y1 * a1_t * v1 - y2 * t * v2;
            };
            const double w_lo = objective(lo), w_hi = objective(hi);
            if (w_lo > w_hi + 1e-12) a2_new = lo;
            else if (w_hi > w_lo + 1e-12) a2_new = hi;
            else return false;
        }

        if (std::fabs(a2_new - a2_old) < 1e-12 * (a2_new + a2_old + 1e-12)) return false;
        const double a1_new = a1_old + s * (a2_old - a2_new);

        const double d1 = y1 * (a1_new - a1_old);
        const double d2 = y2 * (a2_new - a2_old);
        const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        double b_new;
        if (is_free(a1_new)) b_new = b1;
        else if (is_free(a2_new)) b_new = b2;
        else b_new = 0.5 * (b1 + b2);

        const double db = b_new - b_;
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        b_ = b_new;
        for (std::size_t i = 0; i < n_; ++i)
            errors_[i] += d1 * k(i1, i) + d2 * k(i2, i) + db;

        ++steps_;
        return true;
    }

    std::size_t n_;
    KernelSpec kernel_;
    double c_;
    double tol_;
    long max_steps_;
    std::mt19937_64 rng_;
    std::vector<std::vector<double>> x_;
    std::vector<double> y_;
    std::vector<double> k_;
    std::vector<double> alpha_;
    std::vector<double> errors_; // E_i = f(x_i) - y_i
    double b_ = 0.0;
    long steps_ = 0;
    int sweeps_ = 0;
};

} // namespace

SvmModel train_svm(const Dataset& standardized, const SvmTrainOptions& opts,
                   SvmTrainDiagnostics* diagnostics) {
    standardized.validate();
    if (!standardized.scaler)
        throw ConfigError("train_svm expects a standardized dataset (no scaler attached)");
    if (standardized.count_label(+1) == 0 || standardized.count_label(-1) == 0)
        throw ConfigError("train_svm requires both classes in the training data");
    if (opts.c <= 0.0) throw ConfigError("svm C must be positive");

    KernelSpec kernel = opts.kernel;
    if (kernel.gamma == 0.0 && kernel.type != KernelType::linear) {
        double var = pooled_variance(standardized);
        kernel.gamma = var > 0.0
                           ? 1.0 / (static_cast<double>(standardized.dim()) * var)
                           : 1.0;
    }

    SmoSolver solver(standardized, kernel, opts.c, opts.tolerance, opts.max_steps);
    solver.solve();

    SvmModel model;
    model.kernel = kernel;
    model.c = opts.c;
    model.bias = solver.bias();
    model.scaler = *standardized.scaler;
    const auto& alphas = solver.alphas();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] > 1e-12) {
            model.support_vectors.push_back(solver.points()[i]);
            model.dual_coefs.push_back(alphas[i] * solver.labels()[i]);
        }
    }

    if (diagnostics) {
        diagnostics->alphas = alphas;
        diagnostics->steps = solver.steps();
        diagnostics->sweeps = solver.sweeps();
        double say = 0.0;
        for (std::size_t i = 0; i < alphas.size(); ++i) say += alphas[i] * solver.labels()[i];
        diagnostics->sum_alpha_y = say;
        diagnostics->max_kkt_violation = solver.max_violation();
    }
    return model;
}

KktCheck check_kkt(const SvmModel& model, const Dataset& standardized,
                   const std::vector<double>& alphas, double tol) {
    if (alphas.size() != standardized.rows.size())
        throw ShapeError("alpha count does not match dataset size");
    KktCheck out;
    for (std::size_t i = 0; i < standardized.rows.size(); ++i) {
        const auto& r = standardized.rows[i];
        const double margin = r.label * model.decision_value_standardized(r.features);
        const double a = alphas[i];
        double violation = 0.0;
        if (a <= 1e-12) violation = std::max(0.0, 1.0 - margin - tol);
        else if (a >= model.c - 1e-12) violation = std::max(0.0, margin - 1.0 - tol);
        else violation = std::max(0.0, std::fabs(margin - 1.0) - tol);
        if (violation > 0.0) ++out.violating_points;
        out.max_violation = std::max(out.max_violation, violation);
    }
    return out;
}

} // namespace footfall
