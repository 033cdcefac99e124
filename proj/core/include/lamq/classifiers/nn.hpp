#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lamq/features.hpp"

namespace lamq {

struct NnConfig {
  std::vector<std::size_t> hidden_sizes{500};
  double learning_rate = 0.5;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::uint64_t seed = 42;
  /// Standardize each input feature with the training mean and standard
  /// deviation before the first layer.
  bool standardize = true;

  /// Two hidden layers, [500, 100].
  static NnConfig multi_layer();

  void validate() const;
};

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out

  bool operator==(const DenseLayer& other) const {
    return weights == other.weights && bias == other.bias;
  }
};

/// Fully connected network, sigmoid on every hidden and output unit.
/// When `input_mean` is non-empty the input is mapped to
/// (x - input_mean) * input_scale elementwise before the first layer.
struct NnModel {
  std::vector<DenseLayer> layers;
  Eigen::VectorXd input_mean;
  Eigen::VectorXd input_scale;
  NnConfig config;

  std::size_t input_dim() const noexcept { return layers.empty() ? 0 : layers.front().weights.cols(); }
  std::size_t parameter_count() const noexcept;

  /// Pre-sigmoid activation of the output unit (the logit).
  double score(std::span<const double> x) const;
};

/// Parameter count of an untrained network with the given shape.
std::size_t nn_parameter_count(std::size_t input_dim, std::span<const std::size_t> hidden_sizes) noexcept;

/// Seeded initialization: weights uniform in +/- sqrt(6 / (fan_in + fan_out)),
/// biases zero.
NnModel nn_init(std::size_t input_dim, const NnConfig& config);

/// Mean binary cross-entropy of the model over (x, y); Good is the target 1.
double nn_loss(const NnModel& model, const FeatureMatrix& x, std::span<const Label> y);

/// Gradient of nn_loss with respect to every parameter, by backpropagation.
/// Same layout as the model's layers.
std::vector<DenseLayer> nn_gradient(const NnModel& model, const FeatureMatrix& x,
                                    std::span<const Label> y);

/// Mini-batch gradient descent on mean BCE for config.epochs epochs, after
/// fixing the input standardization from `x` when config.standardize is set
/// (constant features get scale 1).
/// Throws Error if the loss becomes non-finite.
NnModel nn_train(const FeatureMatrix& x, std::span<const Label> y, const NnConfig& config);

}  // namespace lamq
