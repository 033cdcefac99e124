#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lamq/features.hpp"

namespace lamq {

struct SvmConfig {
  double lambda = 1e-2;
  std::size_t epochs = 100;
  std::uint64_t seed = 42;
  /// Train on z-scored features and fold the scaling back into w and b.
  bool standardize = true;

  void validate() const;
};

struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  SvmConfig config;

  /// <w, x> + b
  double score(std::span<const double> x) const;
};

/// Pegasos: stochastic subgradient descent on lambda/2 ||(w, b)||^2 + mean
/// hinge loss with step 1 / (lambda t), each iterate projected onto the ball
/// of radius 1 / sqrt(lambda). Each epoch visits the samples in a seeded
/// random order; the returned model is the average of the iterates over the
/// second half of all updates, expressed in the caller's feature space.
LinearSvmModel svm_train(const FeatureMatrix& x, std::span<const Label> y, const SvmConfig& config);

double svm_objective(const LinearSvmModel& model, const FeatureMatrix& x, std::span<const Label> y);

}  // namespace lamq
