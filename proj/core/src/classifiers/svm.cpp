#include "lamq/classifiers/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"
#include "lamq/rng.hpp"

namespace lamq {

void SvmConfig::validate() const {
  if (!(lambda > 0.0)) throw InvalidArgument("svm lambda must be positive");
  if (epochs == 0) throw InvalidArgument("svm epochs must be positive");
}

double LinearSvmModel::score(std::span<const double> x) const {
  detail::require_dim(weights.size(), x.size());
  return detail::dot(weights, x) + bias;
}

namespace {

LinearSvmModel pegasos(const FeatureMatrix& x, std::span<const Label> y, const SvmConfig& config) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t total_updates = config.epochs * n;
  const std::size_t average_from = total_updates / 2 + 1;

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> w_sum(d, 0.0);
  double b_sum = 0.0;
  std::size_t averaged = 0;

  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (config.lambda * static_cast<double>(t));
      const auto xi = x.row(i);
      const double yi = sign(y[i]);
      const double margin = yi * (detail::dot(w, xi) + b);
      const double shrink = 1.0 - eta * config.lambda;
      b *= shrink;
      if (margin < 1.0) {
        for (std::size_t k = 0; k < d; ++k) w[k] = shrink * w[k] + eta * yi * xi[k];
        b += eta * yi;
      } else {
        for (std::size_t k = 0; k < d; ++k) w[k] *= shrink;
      }
      // Projection onto the ball of radius 1 / sqrt(lambda) that holds the optimum.
      const double norm_sq = detail::dot(w, w) + b * b;
      if (norm_sq * config.lambda > 1.0) {
        const double scale = 1.0 / std::sqrt(norm_sq * config.lambda);
        for (double& v : w) v *= scale;
        b *= scale;
      }
      if (t >= average_from) {
        for (std::size_t k = 0; k < d; ++k) w_sum[k] += w[k];
        b_sum += b;
        ++averaged;
      }
    }
  }

  LinearSvmModel model;
  model.config = config;
  model.weights.resize(d);
  const double inv = 1.0 / static_cast<double>(averaged);
  for (std::size_t k = 0; k < d; ++k) model.weights[k] = w_sum[k] * inv;
  model.bias = b_sum * inv;
  return model;
}

}  // namespace

LinearSvmModel svm_train(const FeatureMatrix& x, std::span<const Label> y, const SvmConfig& config) {
  config.validate();
  detail::require_rows(x, y);
  if (x.rows() < 2) throw InvalidArgument("svm needs at least 2 samples");
  detail::require_both_classes(y);
  if (!config.standardize) return pegasos(x, y, config);

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  std::vector<double> mean(d, 0.0), scale(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = x.row(i);
    for (std::size_t k = 0; k < d; ++k) mean[k] += r[k];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = x.row(i);
    for (std::size_t k = 0; k < d; ++k) scale[k] += (r[k] - mean[k]) * (r[k] - mean[k]);
  }
  for (double& s : scale) {
    const double sd = std::sqrt(s / static_cast<double>(n));
    s = sd > 1e-12 ? 1.0 / sd : 1.0;
  }

  FeatureMatrix z(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = x.row(i);
    auto out = z.row(i);
    for (std::size_t k = 0; k < d; ++k) out[k] = (r[k] - mean[k]) * scale[k];
  }

  // <w, (x - mean) * scale> + b  ==  <w * scale, x> + (b - <w * scale, mean>)
  LinearSvmModel model = pegasos(z, y, config);
  for (std::size_t k = 0; k < d; ++k) {
    model.weights[k] *= scale[k];
    model.bias -= model.weights[k] * mean[k];
  }
  return model;
}

double svm_objective(const LinearSvmModel& model, const FeatureMatrix& x, std::span<const Label> y) {
  detail::require_rows(x, y);
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    hinge += std::max(0.0, 1.0 - sign(y[i]) * model.score(x.row(i)));
  }
  const double norm_sq = detail::dot(model.weights, model.weights);
  return 0.5 * model.config.lambda * norm_sq + hinge / static_cast<double>(x.rows());
}

}  // namespace lamq
