#include "lamq/classifiers/nn.hpp"

#include <cmath>
#include <numeric>

#include "common.hpp"
#include "lamq/rng.hpp"

namespace lamq {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd sigmoid(const MatrixXd& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

/// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

/// Columns are samples, standardized as the model requires.
MatrixXd gather_columns(const NnModel& model, const FeatureMatrix& x,
                        std::span<const std::size_t> rows) {
  MatrixXd m(x.cols(), rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) {
    auto r = x.row(rows[c]);
    m.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const VectorXd>(r.data(), r.size());
  }
  if (model.input_mean.size() > 0) {
    m.colwise() -= model.input_mean;
    m.array().colwise() *= model.input_scale.array();
  }
  return m;
}

VectorXd targets(std::span<const Label> y, std::span<const std::size_t> rows) {
  VectorXd t(rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) t[c] = y[rows[c]] == Label::Good ? 1.0 : 0.0;
  return t;
}

struct ForwardPass {
  std::vector<MatrixXd> activations;  // activations[0] is the input
  MatrixXd logits;                    // 1 x batch
};

ForwardPass forward(const NnModel& model, MatrixXd input) {
  ForwardPass pass;
  pass.activations.push_back(std::move(input));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const DenseLayer& layer = model.layers[l];
    MatrixXd z = layer.weights * pass.activations.back();
    z.colwise() += layer.bias;
    if (l + 1 == model.layers.size()) {
      pass.logits = std::move(z);
    } else {
      pass.activations.push_back(sigmoid(z));
    }
  }
  return pass;
}

double mean_bce(const MatrixXd& logits, const VectorXd& t) {
  double loss = 0.0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double z = logits(0, c);
    loss += softplus(z) - t[c] * z;
  }
  return loss / static_cast<double>(logits.cols());
}

/// Backpropagates mean BCE over the batch. With `step` set, applies
/// W -= learning_rate * grad to it layer by layer instead of materializing
/// the gradient (the first layer's gradient is as large as its weights).
std::vector<DenseLayer> backward(const NnModel& model, const ForwardPass& pass, const VectorXd& t,
                                 NnModel* step = nullptr) {
  const std::size_t depth = model.layers.size();
  const double inv_batch = 1.0 / static_cast<double>(t.size());
  std::vector<DenseLayer> grads(step ? 0 : depth);

  // dL/dz at the output: sigmoid(z) - t, averaged over the batch.
  MatrixXd delta = (sigmoid(pass.logits) - t.transpose()) * inv_batch;
  for (std::size_t l = depth; l-- > 0;) {
    const MatrixXd& input = pass.activations[l];
    MatrixXd back;
    if (l > 0) back = model.layers[l].weights.transpose() * delta;
    if (step) {
      const double lr = step->config.learning_rate;
      step->layers[l].weights.noalias() -= lr * delta * input.transpose();
      step->layers[l].bias.noalias() -= lr * delta.rowwise().sum();
    } else {
      grads[l].weights.noalias() = delta * input.transpose();
      grads[l].bias = delta.rowwise().sum();
    }
    if (l > 0) {
      const MatrixXd& a = pass.activations[l];
      delta = back.cwiseProduct(a.cwiseProduct((1.0 - a.array()).matrix()));
    }
  }
  return grads;
}

}  // namespace

NnConfig NnConfig::multi_layer() {
  NnConfig config;
  config.hidden_sizes = {500, 100};
  return config;
}

void NnConfig::validate() const {
  if (hidden_sizes.empty()) throw InvalidArgument("nn needs at least one hidden layer");
  for (std::size_t h : hidden_sizes) {
    if (h == 0) throw InvalidArgument("nn hidden layer sizes must be positive");
  }
  if (!(learning_rate > 0.0)) throw InvalidArgument("nn learning rate must be positive");
  if (batch_size == 0) throw InvalidArgument("nn batch size must be positive");
}

std::size_t nn_parameter_count(std::size_t input_dim, std::span<const std::size_t> hidden_sizes) noexcept {
  std::size_t count = 0;
  std::size_t fan_in = input_dim;
  for (std::size_t h : hidden_sizes) {
    count += fan_in * h + h;
    fan_in = h;
  }
  return count + fan_in + 1;
}

std::size_t NnModel::parameter_count() const noexcept {
  std::size_t count = 0;
  for (const DenseLayer& layer : layers) {
    count += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
  }
  return count;
}

double NnModel::score(std::span<const double> x) const {
  detail::require_dim(input_dim(), x.size());
  VectorXd a = Eigen::Map<const VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  if (input_mean.size() > 0) a = (a - input_mean).cwiseProduct(input_scale);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    VectorXd z = layers[l].weights * a + layers[l].bias;
    if (l + 1 == layers.size()) return z[0];
    a = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  }
  return 0.0;
}

NnModel nn_init(std::size_t input_dim, const NnConfig& config) {
  config.validate();
  if (input_dim == 0) throw InvalidArgument("nn input dimension must be positive");
  NnModel model;
  model.config = config;
  Rng rng(config.seed);
  std::vector<std::size_t> sizes{input_dim};
  sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  sizes.push_back(1);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(sizes[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    // Row-major fill so the draw order does not depend on Eigen's storage.
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weights(r, c) = rng.uniform(-limit, limit);
    }
    layer.bias = VectorXd::Zero(fan_out);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

double nn_loss(const NnModel& model, const FeatureMatrix& x, std::span<const Label> y) {
  detail::require_rows(x, y);
  detail::require_dim(model.input_dim(), x.cols());
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), 0);
  const ForwardPass pass = forward(model, gather_columns(model, x, rows));
  return mean_bce(pass.logits, targets(y, rows));
}

std::vector<DenseLayer> nn_gradient(const NnModel& model, const FeatureMatrix& x,
                                    std::span<const Label> y) {
  detail::require_rows(x, y);
  detail::require_dim(model.input_dim(), x.cols());
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), 0);
  const ForwardPass pass = forward(model, gather_columns(model, x, rows));
  return backward(model, pass, targets(y, rows));
}

NnModel nn_train(const FeatureMatrix& x, std::span<const Label> y, const NnConfig& config) {
  detail::require_rows(x, y);
  detail::require_both_classes(y);
  NnModel model = nn_init(x.cols(), config);
  const std::size_t n = x.rows();
  if (config.standardize) {
    const auto d = static_cast<Eigen::Index>(x.cols());
    model.input_mean = VectorXd::Zero(d);
    model.input_scale = VectorXd::Zero(d);
    for (std::size_t i = 0; i < n; ++i) {
      auto r = x.row(i);
      model.input_mean += Eigen::Map<const VectorXd>(r.data(), d);
    }
    model.input_mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto r = x.row(i);
      model.input_scale +=
          (Eigen::Map<const VectorXd>(r.data(), d) - model.input_mean).cwiseAbs2();
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      const double sd = std::sqrt(model.input_scale[k] / static_cast<double>(n));
      model.input_scale[k] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }
  }

  Rng rng(derive_seed(config.seed, {1}));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      std::span<const std::size_t> batch(order.data() + start, end - start);
      const ForwardPass pass = forward(model, gather_columns(model, x, batch));
      const VectorXd t = targets(y, batch);
      const double loss = mean_bce(pass.logits, t);
      if (!std::isfinite(loss)) {
        throw Error("nn training diverged: non-finite loss at epoch " + std::to_string(epoch));
      }
      backward(model, pass, t, &model);
    }
  }
  return model;
}

}  // namespace lamq
