#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lamq/features.hpp"

namespace lamq {

inline constexpr std::size_t kHoldoutBoostingRounds = 90;
inline constexpr std::size_t kRandomSplitBoostingRounds = 300;

/// Error floor used for alpha when a stump classifies every sample correctly.
inline constexpr double kMinStumpError = 1e-10;

/// Depth-1 tree: h(x) = polarity if x[feature] > threshold, else -polarity.
/// The threshold may be -infinity (constant stump).
struct Stump {
  std::size_t feature_index = 0;
  double threshold = 0.0;
  int polarity = 1;
  double alpha = 0.0;

  int predict(std::span<const double> x) const noexcept {
    return x[feature_index] > threshold ? polarity : -polarity;
  }
};

struct StumpFit {
  std::size_t feature_index = 0;
  double threshold = 0.0;
  int polarity = 1;
  double weighted_error = 0.0;
};

struct AdaBoostConfig {
  std::size_t rounds = kRandomSplitBoostingRounds;
};

struct AdaBoostModel {
  std::vector<Stump> stumps;
  std::size_t rounds = 0;
  /// Dimension of the training features.
  std::size_t feature_dim = 0;

  /// sum_t alpha_t h_t(x)
  double score(std::span<const double> x) const;
};

/// Weighted errors of the accepted stumps, one per round, in order.
struct AdaBoostTrace {
  std::vector<double> errors;
};

/// alpha = 1/2 ln((1 - eps) / eps), with eps floored at kMinStumpError.
double adaboost_alpha(double weighted_error);

/// Exhaustive stump search. Candidate thresholds per feature are -infinity,
/// the midpoints between consecutive distinct values and +infinity. Ties are
/// broken by lower feature index, then lower threshold, then polarity +1.
/// Errors closer than 1e-12 count as ties.
StumpFit stump_search(const FeatureMatrix& x, std::span<const Label> y,
                      std::span<const double> weights);

/// Discrete AdaBoost over stumps. Stops early on a perfect stump (kept, with
/// alpha capped) or on a stump with error >= 1/2 (discarded).
AdaBoostModel adaboost_train(const FeatureMatrix& x, std::span<const Label> y,
                             const AdaBoostConfig& config, AdaBoostTrace* trace = nullptr);

}  // namespace lamq
