#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "footfall/dataset.hpp"

namespace footfall {

// Architecture and training hyperparameters. `dropout_rates[l]` applies to
// the activations feeding weight layer l (so index 0 is input dropout);
// `batch_norm[l]` enables batch normalization after the affine transform of
// hidden layer l, before its ReLU. Empty vectors mean "no dropout / no BN".
struct AnnConfig {
    std::vector<int> layer_sizes = {9, 128, 64, 32, 16, 1};
    std::vector<double> dropout_rates;
    std::vector<bool> batch_norm;
    double learning_rate = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double bn_epsilon = 1e-5;
    double bn_momentum = 0.9;
    int epochs = 300;
    int batch_size = 32;

    // The reference architecture: 9-128-64-32-16-1, BN on the first two
    // hidden layers, 30% dropout on input and first hidden, 20% on the
    // second hidden.
    static AnnConfig reference();

    void validate() const;
};

struct BatchNormParams {
    std::vector<double> gamma;
    std::vector<double> beta;
    std::vector<double> running_mean;
    std::vector<double> running_var;
};

// Trained network in inference mode: dropout off, BN driven by running
// statistics. Weights are row-major (n_out x n_in).
struct AnnModel {
    std::vector<int> layer_sizes;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::optional<BatchNormParams>> batch_norm;
    double bn_epsilon = 1e-5;
    Scaler scaler;
    std::vector<double> epoch_losses; // training-loss trajectory

    double predict_probability_standardized(std::span<const double> x) const;
    double predict_probability(std::span<const double> raw) const;
    // probability >= 0.5 maps to +1
    int predict_label(std::span<const double> raw) const;
};

// Mini-batch backpropagation with Adam on binary cross-entropy; labels
// {-1,+1} are remapped to {0,1}. The dataset must be standardized. Throws
// ConvergenceError when the loss turns non-finite, reporting epoch/batch.
AnnModel train_ann(const Dataset& standardized, const AnnConfig& cfg, std::uint64_t seed);

// Parameter gradients in the same layout as the model parameters.
struct AnnGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::vector<double>> bn_gamma;
    std::vector<std::vector<double>> bn_beta;
};

// Loss (and optionally analytic gradients) of one fixed batch with dropout
// disabled. With bn_training the normalization uses batch statistics (still
// without touching the running stats), otherwise the stored running stats.
// This is the hook the finite-difference verification drives.
double ann_batch_loss(const AnnModel& model,
                      const std::vector<std::vector<double>>& batch_x,
                      const std::vector<double>& batch_y, bool bn_training,
                      AnnGradients* grads = nullptr);

} // namespace footfall
