#pragma once

#include <span>
#include <vector>

#include "lamq/features.hpp"

namespace lamq {

struct SvddConfig {
  double nu = 0.05;
};

/// One-class model: a hypersphere around the mean of the positive samples.
struct SvddModel {
  std::vector<double> center;
  double radius_sq = 0.0;
  double nu = 0.05;

  /// radius_sq - ||x - center||^2; positive inside the sphere.
  double score(std::span<const double> x) const;
};

/// center = mean; radius_sq = the ceil((1 - nu) n)-th smallest squared
/// distance to the center, so at most a nu fraction of the training points
/// score below zero.
SvddModel svdd_train(const FeatureMatrix& positives, double nu);

}  // namespace lamq
