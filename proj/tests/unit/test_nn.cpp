#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lamq/classifiers/nn.hpp"
#include "lamq/error.hpp"
#include "test_support.hpp"

using namespace lamq;

namespace {

NnConfig small_config(bool standardize) {
  NnConfig c;
  c.hidden_sizes = {4, 3};
  c.standardize = standardize;
  c.seed = 5;
  return c;
}

/// Compares backprop to central differences on every parameter.
void check_gradient(const NnModel& model, const FeatureMatrix& x, std::span<const Label> y) {
  const std::vector<DenseLayer> grads = nn_gradient(model, x, y);
  REQUIRE(grads.size() == model.layers.size());
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    auto probe = [&](auto get, double analytic) {
      NnModel plus = model, minus = model;
      get(plus) += h;
      get(minus) -= h;
      const double numeric = (nn_loss(plus, x, y) - nn_loss(minus, x, y)) / (2 * h);
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-3});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    };
    const auto& w = model.layers[l].weights;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        probe([&](NnModel& m) -> double& { return m.layers[l].weights(r, c); },
              grads[l].weights(r, c));
      }
      probe([&](NnModel& m) -> double& { return m.layers[l].bias(r); }, grads[l].bias(r));
    }
  }
  CHECK(worst < 1e-5);
}

}  // namespace

TEST_CASE("parameter count of the single hidden layer network") {
  const std::size_t hidden[] = {500};
  CHECK(nn_parameter_count(9600, hidden) == 4801001);
  const std::size_t two[] = {500, 100};
  CHECK(nn_parameter_count(9600, two) == 9600 * 500 + 500 + 500 * 100 + 100 + 101);
  const NnModel m = nn_init(9600, NnConfig{});
  CHECK(m.parameter_count() == 4801001);
  CHECK(m.input_dim() == 9600);
}

TEST_CASE("initialization shapes, ranges and determinism") {
  const NnConfig c = NnConfig::multi_layer();
  const NnModel a = nn_init(20, c), b = nn_init(20, c);
  REQUIRE(a.layers.size() == 3);
  CHECK(a.layers[0].weights.rows() == 500);
  CHECK(a.layers[1].weights.rows() == 100);
  CHECK(a.layers[2].weights.rows() == 1);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(a.layers[l] == b.layers[l]);
    const auto& w = a.layers[l].weights;
    const double limit = std::sqrt(6.0 / double(w.rows() + w.cols()));
    CHECK(w.cwiseAbs().maxCoeff() <= limit);
    CHECK(a.layers[l].bias.isZero());
  }
}

TEST_CASE("config validation") {
  NnConfig c;
  c.hidden_sizes.clear();
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK_THROWS_AS(nn_init(0, NnConfig{}), InvalidArgument);
}

TEST_CASE("zero epochs leave the initial layers untouched") {
  Rng rng(61);
  const FeatureMatrix x = test::random_matrix(rng, 20, 6);
  const std::vector<Label> y = test::random_labels(rng, 20);
  NnConfig c = small_config(true);
  c.epochs = 0;
  const NnModel trained = nn_train(x, y, c);
  const NnModel init = nn_init(6, c);
  REQUIRE(trained.layers.size() == init.layers.size());
  for (std::size_t l = 0; l < init.layers.size(); ++l) CHECK(trained.layers[l] == init.layers[l]);
}

TEST_CASE("backprop matches finite differences without standardization") {
  Rng rng(67);
  const FeatureMatrix x = test::random_matrix(rng, 7, 5);
  const std::vector<Label> y = test::random_labels(rng, 7);
  check_gradient(nn_init(5, small_config(false)), x, y);
}

TEST_CASE("backprop matches finite differences with standardization") {
  Rng rng(71);
  const FeatureMatrix x = test::random_matrix(rng, 7, 5, 2.0, 9.0);
  const std::vector<Label> y = test::random_labels(rng, 7);
  NnModel m = nn_init(5, small_config(true));
  m.input_mean = Eigen::VectorXd::Constant(5, 5.5);
  m.input_scale = Eigen::VectorXd::Constant(5, 0.4);
  check_gradient(m, x, y);
}

TEST_CASE("loss is mean binary cross-entropy of the output logit") {
  Rng rng(73);
  const FeatureMatrix x = test::random_matrix(rng, 9, 3);
  const std::vector<Label> y = test::random_labels(rng, 9);
  const NnModel m = nn_init(3, small_config(false));
  double expected = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-m.score(x.row(i))));
    expected -= y[i] == Label::Good ? std::log(p) : std::log(1.0 - p);
  }
  CHECK(nn_loss(m, x, y) == doctest::Approx(expected / 9).epsilon(1e-12));
}

TEST_CASE("training lowers the loss on a toy problem") {
  Rng rng(79);
  const std::size_t n = 64;
  FeatureMatrix x(n, 2);
  std::vector<Label> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    x(i, 1) = rng.uniform(-1, 1);
    y[i] = x(i, 0) + x(i, 1) > 0 ? Label::Good : Label::Bad;
  }
  NnConfig c = small_config(false);
  c.learning_rate = 0.01;
  c.epochs = 0;
  const double before = nn_loss(nn_train(x, y, c), x, y);
  c.epochs = 50;
  const double after = nn_loss(nn_train(x, y, c), x, y);
  CHECK(after < before);

  NnConfig fast = small_config(true);
  fast.epochs = 300;
  const NnModel m = nn_train(x, y, fast);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += (m.score(x.row(i)) > 0) == (y[i] == Label::Good);
  CHECK(correct >= 58);
}

TEST_CASE("standardization statistics come from the training data") {
  Rng rng(83);
  FeatureMatrix x = test::random_matrix(rng, 30, 3, 10.0, 20.0);
  for (std::size_t i = 0; i < 30; ++i) x(i, 2) = 4.0;  // constant column
  const std::vector<Label> y = test::random_labels(rng, 30);
  NnConfig c = small_config(true);
  c.epochs = 1;
  const NnModel m = nn_train(x, y, c);
  REQUIRE(m.input_mean.size() == 3);
  double mean0 = 0.0, var0 = 0.0;
  for (std::size_t i = 0; i < 30; ++i) mean0 += x(i, 0) / 30;
  for (std::size_t i = 0; i < 30; ++i) var0 += (x(i, 0) - mean0) * (x(i, 0) - mean0) / 30;
  CHECK(m.input_mean[0] == doctest::Approx(mean0));
  CHECK(m.input_scale[0] == doctest::Approx(1.0 / std::sqrt(var0)).epsilon(1e-6));
  CHECK(m.input_mean[2] == doctest::Approx(4.0));
  CHECK(m.input_scale[2] == 1.0);

  NnConfig off = small_config(false);
  off.epochs = 1;
  CHECK(nn_train(x, y, off).input_mean.size() == 0);
}

TEST_CASE("training is deterministic") {
  Rng rng(89);
  const FeatureMatrix x = test::random_matrix(rng, 40, 8);
  const std::vector<Label> y = test::random_labels(rng, 40);
  NnConfig c = small_config(true);
  c.epochs = 3;
  const NnModel a = nn_train(x, y, c), b = nn_train(x, y, c);
  for (std::size_t l = 0; l < a.layers.size(); ++l) CHECK(a.layers[l] == b.layers[l]);
  CHECK_THROWS_AS(nn_train(x, std::vector<Label>(40, Label::Bad), c), InvalidArgument);
}
