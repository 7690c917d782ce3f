#include "footfall/ann.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace footfall {

AnnConfig AnnConfig::reference() {
    AnnConfig cfg;
    cfg.layer_sizes = {9, 128, 64, 32, 16, 1};
    cfg.dropout_rates = {0.3, 0.3, 0.2, 0.0, 0.0};
    cfg.batch_norm = {true, true, false, false};
    return cfg;
}

void AnnConfig::validate() const {
    if (layer_sizes.size() < 2) throw ConfigError("ann needs at least input and output layers");
    for (int n : layer_sizes)
        if (n < 1) throw ConfigError("ann layer sizes must be positive");
    if (layer_sizes.back() != 1) throw ConfigError("ann output layer must have one neuron");
    const std::size_t n_weight_layers = layer_sizes.size() - 1;
    if (!dropout_rates.empty() && dropout_rates.size() != n_weight_layers)
        throw ConfigError("dropout_rates must have one entry per weight layer");
    for (double r : dropout_rates)
        if (r < 0.0 || r >= 1.0) throw ConfigError("dropout rates must lie in [0, 1)");
    if (!batch_norm.empty() && batch_norm.size() != n_weight_layers - 1)
        throw ConfigError("batch_norm must have one entry per hidden layer");
    if (learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
    if (epochs < 1 || batch_size < 1) throw ConfigError("epochs and batch size must be >= 1");
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// numerically stable binary cross-entropy from the logit
inline double bce_from_logit(double z, double y) {
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::fabs(z)));
}

struct ForwardOptions {
    bool bn_training = false;
    bool update_running = false;
    double bn_momentum = 0.9;
    // scaled dropout masks (entries are 0 or 1/(1-p)) per weight layer input
    const std::vector<std::vector<double>>* dropout_masks = nullptr;
};

// Everything the backward pass needs, kept per batch.
struct BatchCache {
    std::size_t batch = 0;
    std::vector<std::vector<double>> activations; // A[0..L], dropout applied
    std::vector<std::vector<double>> pre_bn;      // Z[l], affine output
    std::vector<std::vector<double>> post_bn;     // Zt[l], BN (or copy of Z)
    std::vector<std::vector<double>> bn_zhat;
    std::vector<std::vector<double>> bn_invstd;   // per neuron
    std::vector<std::vector<double>> bn_mean;
    std::vector<double> probabilities;
    std::vector<double> logits;
};

double forward_batch(AnnModel& model, const std::vector<double>& x_flat,
                     const std::vector<double>& y, std::size_t batch,
                     const ForwardOptions& opts, BatchCache& cache) {
    const auto& sizes = model.layer_sizes;
    const std::size_t n_layers = sizes.size() - 1;

    cache.batch = batch;
    cache.activations.assign(n_layers + 1, {});
    cache.pre_bn.assign(n_layers, {});
    cache.post_bn.assign(n_layers, {});
    cache.bn_zhat.assign(n_layers, {});
    cache.bn_invstd.assign(n_layers, {});
    cache.bn_mean.assign(n_layers, {});

    cache.activations[0] = x_flat;
    if (opts.dropout_masks && !(*opts.dropout_masks)[0].empty()) {
        auto& a0 = cache.activations[0];
        const auto& mask = (*opts.dropout_masks)[0];
        for (std::size_t i = 0; i < a0.size(); ++i) a0[i] *= mask[i];
    }

    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t n_in = static_cast<std::size_t>(sizes[l]);
        const std::size_t n_out = static_cast<std::size_t>(sizes[l + 1]);
        const auto& w = model.weights[l];
        const auto& b = model.biases[l];
        const auto& a_prev = cache.activations[l];

        auto& z = cache.pre_bn[l];
        z.assign(batch * n_out, 0.0);
        for (std::size_t r = 0; r < batch; ++r) {
            const double* in = a_prev.data() + r * n_in;
            double* out = z.data() + r * n_out;
            for (std::size_t o = 0; o < n_out; ++o) {
                const double* wrow = w.data() + o * n_in;
                double acc = b[o];
                for (std::size_t i = 0; i < n_in; ++i) acc += wrow[i] * in[i];
                out[o] = acc;
            }
        }

        const bool is_output = l + 1 == n_layers;
        if (is_output) {
            cache.post_bn[l] = z;
            cache.logits.resize(batch);
            cache.probabilities.resize(batch);
            for (std::size_t r = 0; r < batch; ++r) {
                cache.logits[r] = z[r];
                cache.probabilities[r] = sigmoid(z[r]);
            }
            break;
        }

        auto& zt = cache.post_bn[l];
        if (model.batch_norm[l]) {
            auto& bn = *model.batch_norm[l];
            zt.assign(batch * n_out, 0.0);
            auto& zhat = cache.bn_zhat[l];
            zhat.assign(batch * n_out, 0.0);
            auto& invstd = cache.bn_invstd[l];
            invstd.assign(n_out, 0.0);
            auto& mean = cache.bn_mean[l];
            mean.assign(n_out, 0.0);

            for (std::size_t o = 0; o < n_out; ++o) {
                double mu, var;
                if (opts.bn_training) {
                    mu = 0.0;
                    for (std::size_t r = 0; r < batch; ++r) mu += z[r * n_out + o];
                    mu /= static_cast<double>(batch);
                    var = 0.0;
                    for (std::size_t r = 0; r < batch; ++r) {
                        double d = z[r * n_out + o] - mu;
                        var += d * d;
                    }
                    var /= static_cast<double>(batch);
                    if (opts.update_running) {
                        bn.running_mean[o] = opts.bn_momentum * bn.running_mean[o] +
                                             (1.0 - opts.bn_momentum) * mu;
                        bn.running_var[o] = opts.bn_momentum * bn.running_var[o] +
                                            (1.0 - opts.bn_momentum) * var;
                    }
                } else {
                    mu = bn.running_mean[o];
                    var = bn.running_var[o];
                }
                const double istd = 1.0 / std::sqrt(var + model.bn_epsilon);
                mean[o] = mu;
                invstd[o] = istd;
                for (std::size_t r = 0; r < batch; ++r) {
                    double zh = (z[r * n_out + o] - mu) * istd;
                    zhat[r * n_out + o] = zh;
                    zt[r * n_out + o] = bn.gamma[o] * zh + bn.beta[o];
                }
            }
        } else {
            zt = z;
        }

        auto& a = cache.activations[l + 1];
        a.resize(batch * n_out);
        for (std::size_t i = 0; i < zt.size(); ++i) a[i] = zt[i] > 0.0 ? zt[i] : 0.0;
        if (opts.dropout_masks && !(*opts.dropout_masks)[l + 1].empty()) {
            const auto& mask = (*opts.dropout_masks)[l + 1];
            for (std::size_t i = 0; i < a.size(); ++i) a[i] *= mask[i];
        }
    }

    double loss = 0.0;
    for (std::size_t r = 0; r < batch; ++r) loss += bce_from_logit(cache.logits[r], y[r]);
    return loss / static_cast<double>(batch);
}

void backward_batch(const AnnModel& model, const std::vector<double>& y,
                    const ForwardOptions& opts, const BatchCache& cache, AnnGradients& grads) {
    const auto& sizes = model.layer_sizes;
    const std::size_t n_layers = sizes.size() - 1;
    const std::size_t batch = cache.batch;

    grads.weights.assign(n_layers, {});
    grads.biases.assign(n_layers, {});
    grads.bn_gamma.assign(n_layers, {});
    grads.bn_beta.assign(n_layers, {});

    // dL/dz of the output layer for mean BCE
    std::vector<double> dz(batch);
    for (std::size_t r = 0; r < batch; ++r)
        dz[r] = (cache.probabilities[r] - y[r]) / static_cast<double>(batch);

    for (std::size_t li = n_layers; li-- > 0;) {
        const std::size_t n_in = static_cast<std::size_t>(sizes[li]);
        const std::size_t n_out = static_cast<std::size_t>(sizes[li + 1]);
        const auto& a_prev = cache.activations[li];

        auto& gw = grads.weights[li];
        auto& gb = grads.biases[li];
        gw.assign(n_in * n_out, 0.0);
        gb.assign(n_out, 0.0);
        for (std::size_t r = 0; r < batch; ++r) {
            const double* d = dz.data() + r * n_out;
            const double* in = a_prev.data() + r * n_in;
            for (std::size_t o = 0; o < n_out; ++o) {
                gb[o] += d[o];
                double* grow = gw.data() + o * n_in;
                for (std::size_t i = 0; i < n_in; ++i) grow[i] += d[o] * in[i];
            }
        }

        if (li == 0) break;

        // propagate to the previous activation
        std::vector<double> da(batch * n_in, 0.0);
        const auto& w = model.weights[li];
        for (std::size_t r = 0; r < batch; ++r) {
            const double* d = dz.data() + r * n_out;
            double* out = da.data() + r * n_in;
            for (std::size_t o = 0; o < n_out; ++o) {
                const double* wrow = w.data() + o * n_in;
                for (std::size_t i = 0; i < n_in; ++i) out[i] += d[o] * wrow[i];
            }
        }
        if (opts.dropout_masks && !(*opts.dropout_masks)[li].empty()) {
            const auto& mask = (*opts.dropout_masks)[li];
            for (std::size_t i = 0; i < da.size(); ++i) da[i] *= mask[i];
        }

        // through the ReLU of hidden layer li-1 (0-based weight layer index)
        const std::size_t hl = li - 1;
        const auto& zt = cache.post_bn[hl];
        std::vector<double> dzt(batch * n_in);
        for (std::size_t i = 0; i < dzt.size(); ++i) dzt[i] = zt[i] > 0.0 ? da[i] : 0.0;

        if (model.batch_norm[hl]) {
            const auto& bn = *model.batch_norm[hl];
            const auto& z = cache.pre_bn[hl];
            const auto& zhat = cache.bn_zhat[hl];
            const auto& invstd = cache.bn_invstd[hl];
            const auto& mean = cache.bn_mean[hl];

            auto& ggamma = grads.bn_gamma[hl];
            auto& gbeta = grads.bn_beta[hl];
            ggamma.assign(n_in, 0.0);
            gbeta.assign(n_in, 0.0);

            std::vector<double> dznew(batch * n_in, 0.0);
            for (std::size_t o = 0; o < n_in; ++o) {
                double sum_dzt = 0.0, sum_dzt_zhat = 0.0;
                for (std::size_t r = 0; r < batch; ++r) {
                    sum_dzt += dzt[r * n_in + o];
                    sum_dzt_zhat += dzt[r * n_in + o] * zhat[r * n_in + o];
                }
                ggamma[o] = sum_dzt_zhat;
                gbeta[o] = sum_dzt;

                if (opts.bn_training) {
                    // backward through batch statistics
                    const double bsz = static_cast<double>(batch);
                    double dvar = 0.0, dmu = 0.0, sum_zc = 0.0;
                    for (std::size_t r = 0; r < batch; ++r) {
                        double dzh = dzt[r * n_in + o] * bn.gamma[o];
                        double zc = z[r * n_in + o] - mean[o];
                        sum_zc += zc;
                        dvar += dzh * zc;
                        dmu -= dzh;
                    }
                    dvar *= -0.5 * invstd[o] * invstd[o] * invstd[o];
                    dmu *= invstd[o];
                    dmu += dvar * (-2.0 / bsz) * sum_zc;
                    for (std::size_t r = 0; r < batch; ++r) {
                        double dzh = dzt[r * n_in + o] * bn.gamma[o];
                        double zc = z[r * n_in + o] - mean[o];
                        dznew[r * n_in + o] =
                            dzh * invstd[o] + dvar * 2.0 * zc / bsz + dmu / bsz;
                    }
                } else {
                    // frozen statistics: the transform is per-element affine
                    for (std::size_t r = 0; r < batch; ++r)
                        dznew[r * n_in + o] = dzt[r * n_in + o] * bn.gamma[o] * invstd[o];
                }
            }
            dz = std::move(dznew);
        } else {
            dz = std::move(dzt);
        }
    }
}

// He initialization for ReLU layers, Xavier for the sigmoid output.
void init_parameters(AnnModel& model, const AnnConfig& cfg, std::mt19937_64& rng) {
    const auto& sizes = cfg.layer_sizes;
    const std::size_t n_layers = sizes.size() - 1;
    model.layer_sizes = sizes;
    model.weights.resize(n_layers);
    model.biases.resize(n_layers);
    model.batch_norm.assign(n_layers, std::nullopt);
    model.bn_epsilon = cfg.bn_epsilon;

    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t n_in = static_cast<std::size_t>(sizes[l]);
        const std::size_t n_out = static_cast<std::size_t>(sizes[l + 1]);
        const bool is_output = l + 1 == n_layers;
        const double stddev =
            is_output ? std::sqrt(1.0 / static_cast<double>(n_in))
                      : std::sqrt(2.0 / static_cast<double>(n_in));
        model.weights[l].resize(n_in * n_out);
        for (double& v : model.weights[l]) v = stddev * normal(rng);
        model.biases[l].assign(n_out, 0.0);
        if (!is_output && !cfg.batch_norm.empty() && cfg.batch_norm[l]) {
            BatchNormParams bn;
            bn.gamma.assign(n_out, 1.0);
            bn.beta.assign(n_out, 0.0);
            bn.running_mean.assign(n_out, 0.0);
            bn.running_var.assign(n_out, 1.0);
            model.batch_norm[l] = std::move(bn);
        }
    }
}

struct AdamState {
    std::vector<double> m, v;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void adam_update(std::vector<double>& param, const std::vector<double>& grad, AdamState& state,
                 const AnnConfig& cfg, long t) {
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < param.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        param[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
    }
}

} // namespace

double AnnModel::predict_probability_standardized(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(layer_sizes.front()))
        throw ShapeError("ann input dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(layer_sizes.front()));
    std::vector<double> a(x.begin(), x.end());
    const std::size_t n_layers = layer_sizes.size() - 1;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t n_in = static_cast<std::size_t>(layer_sizes[l]);
        const std::size_t n_out = static_cast<std::size_t>(layer_sizes[l + 1]);
        std::vector<double> z(n_out);
        for (std::size_t o = 0; o < n_out; ++o) {
            const double* wrow = weights[l].data() + o * n_in;
            double acc = biases[l][o];
            for (std::size_t i = 0; i < n_in; ++i) acc += wrow[i] * a[i];
            z[o] = acc;
        }
        if (l + 1 == n_layers) return sigmoid(z[0]);
        if (batch_norm[l]) {
            const auto& bn = *batch_norm[l];
            for (std::size_t o = 0; o < n_out; ++o) {
                double istd = 1.0 / std::sqrt(bn.running_var[o] + bn_epsilon);
                z[o] = bn.gamma[o] * (z[o] - bn.running_mean[o]) * istd + bn.beta[o];
            }
        }
        for (double& v : z) v = v > 0.0 ? v : 0.0;
        a = std::move(z);
    }
    return 0.5; // unreachable
}

double AnnModel::predict_probability(std::span<const double> raw) const {
    return predict_probability_standardized(apply_scaler(raw, scaler));
}

int AnnModel::predict_label(std::span<const double> raw) const {
    return predict_probability(raw) >= 0.5 ? +1 : -1;
}

double ann_batch_loss(const AnnModel& model, const std::vector<std::vector<double>>& batch_x,
                      const std::vector<double>& batch_y, bool bn_training,
                      AnnGradients* grads) {
    if (batch_x.empty() || batch_x.size() != batch_y.size())
        throw ShapeError("ann_batch_loss: inconsistent batch");
    const std::size_t batch = batch_x.size();
    const std::size_t n_in = static_cast<std::size_t>(model.layer_sizes.front());
    std::vector<double> x_flat;
    x_flat.reserve(batch * n_in);
    for (const auto& row : batch_x) {
        if (row.size() != n_in) throw ShapeError("ann_batch_loss: bad input dimension");
        x_flat.insert(x_flat.end(), row.begin(), row.end());
    }

    AnnModel scratch = model;
    ForwardOptions opts;
    opts.bn_training = bn_training;
    opts.update_running = false;
    BatchCache cache;
    double loss = forward_batch(scratch, x_flat, batch_y, batch, opts, cache);
    if (grads) backward_batch(scratch, batch_y, opts, cache, *grads);
    return loss;
}

AnnModel train_ann(const Dataset& standardized, const AnnConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    standardized.validate();
    if (!standardized.scaler)
        throw ConfigError("train_ann expects a standardized dataset (no scaler attached)");
    if (standardized.dim() != static_cast<std::size_t>(cfg.layer_sizes.front()))
        throw ShapeError("dataset dimension " + std::to_string(standardized.dim()) +
                         " does not match the input layer " +
                         std::to_string(cfg.layer_sizes.front()));

    std::mt19937_64 rng(seed);
    AnnModel model;
    init_parameters(model, cfg, rng);
    model.scaler = *standardized.scaler;

    const std::size_t n = standardized.rows.size();
    const std::size_t n_layers = cfg.layer_sizes.size() - 1;

    std::vector<AdamState> w_state, b_state, g_state, beta_state;
    for (std::size_t l = 0; l < n_layers; ++l) {
        w_state.emplace_back(model.weights[l].size());
        b_state.emplace_back(model.biases[l].size());
        const std::size_t bn_n = model.batch_norm[l] ? model.batch_norm[l]->gamma.size() : 0;
        g_state.emplace_back(bn_n);
        beta_state.emplace_back(bn_n);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    long adam_t = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;

        for (std::size_t start = 0, batch_idx = 0; start < n;
             start += cfg.batch_size, ++batch_idx) {
            const std::size_t batch = std::min<std::size_t>(cfg.batch_size, n - start);

            std::vector<double> x_flat;
            x_flat.reserve(batch * standardized.dim());
            std::vector<double> y(batch);
            for (std::size_t r = 0; r < batch; ++r) {
                const auto& row = standardized.rows[order[start + r]];
                x_flat.insert(x_flat.end(), row.features.begin(), row.features.end());
                y[r] = row.label == 1 ? 1.0 : 0.0;
            }

            // scaled dropout masks per weight-layer input
            std::vector<std::vector<double>> masks(n_layers);
            if (!cfg.dropout_rates.empty()) {
                for (std::size_t l = 0; l < n_layers; ++l) {
                    const double rate = cfg.dropout_rates[l];
                    if (rate <= 0.0) continue;
                    const std::size_t width = static_cast<std::size_t>(cfg.layer_sizes[l]);
                    masks[l].resize(batch * width);
                    const double scale = 1.0 / (1.0 - rate);
                    for (double& m : masks[l]) m = unit(rng) < rate ? 0.0 : scale;
                }
            }

            ForwardOptions opts;
            opts.bn_training = true;
            opts.update_running = true;
            opts.bn_momentum = cfg.bn_momentum;
            opts.dropout_masks = &masks;

            BatchCache cache;
            double loss = forward_batch(model, x_flat, y, batch, opts, cache);
            if (!std::isfinite(loss))
                throw ConvergenceError("non-finite training loss at epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_idx));
            loss_sum += loss * static_cast<double>(batch);

            AnnGradients grads;
            backward_batch(model, y, opts, cache, grads);

            ++adam_t;
            for (std::size_t l = 0; l < n_layers; ++l) {
                adam_update(model.weights[l], grads.weights[l], w_state[l], cfg, adam_t);
                adam_update(model.biases[l], grads.biases[l], b_state[l], cfg, adam_t);
                if (model.batch_norm[l]) {
                    adam_update(model.batch_norm[l]->gamma, grads.bn_gamma[l], g_state[l], cfg,
                                adam_t);
                    adam_update(model.batch_norm[l]->beta, grads.bn_beta[l], beta_state[l], cfg,
                                adam_t);
                }
            }
        }
        model.epoch_losses.push_back(loss_sum / static_cast<double>(n));
    }
    return model;
}

} // namespace footfall
