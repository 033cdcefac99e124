#include "lamq/classifiers/svdd.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace lamq {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

double SvddModel::score(std::span<const double> x) const {
  detail::require_dim(center.size(), x.size());
  return radius_sq - squared_distance(x, center);
}

SvddModel svdd_train(const FeatureMatrix& positives, double nu) {
  if (positives.rows() == 0) throw InvalidArgument("svdd needs at least one positive sample");
  if (!(nu > 0.0 && nu <= 1.0)) throw InvalidArgument("svdd nu must lie in (0, 1]");

  const std::size_t n = positives.rows();
  SvddModel model;
  model.nu = nu;
  model.center.assign(positives.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = positives.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) model.center[k] += row[k];
  }
  for (double& c : model.center) c /= static_cast<double>(n);

  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = squared_distance(positives.row(i), model.center);
  std::sort(dist.begin(), dist.end());

  // 1-based rank of the radius; the slack absorbs rounding in (1 - nu) * n.
  const double rank = std::ceil((1.0 - nu) * static_cast<double>(n) - 1e-9);
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(rank, 1.0)), 1, n);
  model.radius_sq = dist[k - 1];
  return model;
}

}  // namespace lamq
