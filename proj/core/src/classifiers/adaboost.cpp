#include "lamq/classifiers/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "common.hpp"

namespace lamq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;

double midpoint(double a, double b) {
  const double m = a + 0.5 * (b - a);
  // Adjacent doubles can round the midpoint up onto b.
  return m < b ? m : a;
}

/// Presorts every feature once so each boosting round is a linear sweep.
class StumpSearcher {
 public:
  StumpSearcher(const FeatureMatrix& x, std::span<const Label> y)
      : n_(x.rows()), d_(x.cols()), y_(y.begin(), y.end()), order_(n_ * d_), values_(n_ * d_) {
    std::vector<std::uint32_t> idx(n_);
    for (std::size_t f = 0; f < d_; ++f) {
      std::iota(idx.begin(), idx.end(), 0u);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return x(a, f) < x(b, f); });
      for (std::size_t r = 0; r < n_; ++r) {
        order_[f * n_ + r] = idx[r];
        values_[f * n_ + r] = x(idx[r], f);
      }
    }
  }

  StumpFit search(std::span<const double> weights) const {
    std::vector<double> signed_w(n_);
    double pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      signed_w[i] = weights[i] * sign(y_[i]);
      (y_[i] == Label::Good ? pos : neg) += weights[i];
    }

    StumpFit best;
    best.weighted_error = kInf;
    auto consider = [&](std::size_t f, double threshold, int polarity, double err) {
      if (err < best.weighted_error - kTieTolerance) {
        best = {f, threshold, polarity, err};
      }
    };

    for (std::size_t f = 0; f < d_; ++f) {
      const std::uint32_t* order = order_.data() + f * n_;
      const double* values = values_.data() + f * n_;
      // Polarity +1 predicts Good above the threshold, polarity -1 below.
      double err_plus = neg;
      double err_minus = pos;
      consider(f, -kInf, 1, err_plus);
      consider(f, -kInf, -1, err_minus);
      for (std::size_t r = 0; r < n_; ++r) {
        const double s = signed_w[order[r]];
        err_plus += s;
        err_minus -= s;
        if (r + 1 < n_ && values[r + 1] == values[r]) continue;
        const double threshold = r + 1 < n_ ? midpoint(values[r], values[r + 1]) : kInf;
        consider(f, threshold, 1, err_plus);
        consider(f, threshold, -1, err_minus);
      }
    }
    best.weighted_error = std::max(best.weighted_error, 0.0);
    return best;
  }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<Label> y_;
  std::vector<std::uint32_t> order_;
  std::vector<double> values_;
};

}  // namespace

double AdaBoostModel::score(std::span<const double> x) const {
  if (feature_dim != 0) detail::require_dim(feature_dim, x.size());
  double acc = 0.0;
  for (const Stump& s : stumps) {
    if (s.feature_index >= x.size()) {
      throw InvalidArgument("stump feature " + std::to_string(s.feature_index) +
                            " out of range for input of dimension " + std::to_string(x.size()));
    }
    acc += s.alpha * s.predict(x);
  }
  return acc;
}

double adaboost_alpha(double weighted_error) {
  const double eps = std::max(weighted_error, kMinStumpError);
  return 0.5 * std::log((1.0 - eps) / eps);
}

StumpFit stump_search(const FeatureMatrix& x, std::span<const Label> y,
                      std::span<const double> weights) {
  detail::require_rows(x, y);
  if (weights.size() != y.size()) throw InvalidArgument("one weight per sample required");
  if (x.rows() == 0 || x.cols() == 0) throw InvalidArgument("stump_search on empty data");
  return StumpSearcher(x, y).search(weights);
}

AdaBoostModel adaboost_train(const FeatureMatrix& x, std::span<const Label> y,
                             const AdaBoostConfig& config, AdaBoostTrace* trace) {
  detail::require_rows(x, y);
  detail::require_both_classes(y);
  if (config.rounds == 0) throw InvalidArgument("adaboost rounds must be positive");
  if (x.cols() == 0) throw InvalidArgument("adaboost on zero-dimensional features");

  const std::size_t n = x.rows();
  StumpSearcher searcher(x, y);
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));

  AdaBoostModel model;
  model.rounds = config.rounds;
  model.feature_dim = x.cols();
  if (trace) trace->errors.clear();

  for (std::size_t round = 0; round < config.rounds; ++round) {
    const StumpFit fit = searcher.search(weights);
    if (fit.weighted_error >= 0.5) break;

    Stump stump{fit.feature_index, fit.threshold, fit.polarity, adaboost_alpha(fit.weighted_error)};
    model.stumps.push_back(stump);
    if (trace) trace->errors.push_back(fit.weighted_error);
    if (fit.weighted_error < kMinStumpError) break;

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] *= std::exp(-stump.alpha * sign(y[i]) * stump.predict(x.row(i)));
      total += weights[i];
    }
    for (double& w : weights) w /= total;
  }
  return model;
}

}  // namespace lamq
