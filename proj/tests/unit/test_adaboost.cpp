#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lamq/classifiers/adaboost.hpp"
#include "lamq/error.hpp"
#include "test_support.hpp"

using namespace lamq;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stump_error(const FeatureMatrix& x, std::span<const Label> y, std::span<const double> w,
                   std::size_t f, double thr, int pol) {
  double err = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const int pred = x(i, f) > thr ? pol : -pol;
    if (pred != sign(y[i])) err += w[i];
  }
  return err;
}

/// Exhaustive stump search with first-wins ties (tolerance 1e-12), scanning
/// features in order, thresholds ascending, polarity +1 before -1.
StumpFit brute_force(const FeatureMatrix& x, std::span<const Label> y, std::span<const double> w) {
  StumpFit best;
  best.weighted_error = kInf;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::vector<double> v(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) v[i] = x(i, f);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> thresholds{-kInf};
    for (std::size_t r = 0; r + 1 < v.size(); ++r) thresholds.push_back((v[r] + v[r + 1]) / 2);
    thresholds.push_back(kInf);
    for (double thr : thresholds) {
      for (int pol : {1, -1}) {
        const double e = stump_error(x, y, w, f, thr, pol);
        if (e < best.weighted_error - 1e-12) best = {f, thr, pol, e};
      }
    }
  }
  return best;
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) total += v = rng.uniform(0.01, 1.0);
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

TEST_CASE("alpha formula") {
  CHECK(adaboost_alpha(0.25) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
  CHECK(adaboost_alpha(0.5) == 0.0);
  CHECK(adaboost_alpha(0.0) == doctest::Approx(0.5 * std::log((1 - 1e-10) / 1e-10)));
  CHECK(std::isfinite(adaboost_alpha(0.0)));
}

TEST_CASE("stump prediction uses strict greater-than") {
  Stump s{1, 0.5, 1, 1.0};
  const double above[] = {0.0, 0.6}, at[] = {0.0, 0.5};
  CHECK(s.predict(above) == 1);
  CHECK(s.predict(at) == -1);
  s.polarity = -1;
  CHECK(s.predict(above) == -1);
}

TEST_CASE("stump search matches exhaustive search") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.index(40), d = 1 + rng.index(6);
    FeatureMatrix x = test::random_matrix(rng, n, d);
    if (trial % 3 == 0) {
      // Heavy value ties.
      for (std::size_t i = 0; i < n; ++i)
        for (double& v : x.row(i)) v = std::round(v * 2.0);
    }
    const std::vector<Label> y = test::random_labels(rng, n);
    const std::vector<double> w = random_weights(rng, n);

    const StumpFit got = stump_search(x, y, w);
    const StumpFit want = brute_force(x, y, w);
    CHECK(got.weighted_error == doctest::Approx(want.weighted_error).epsilon(1e-12));
    CHECK(got.feature_index == want.feature_index);
    CHECK(got.polarity == want.polarity);
    if (std::isinf(want.threshold)) {
      CHECK(got.threshold == want.threshold);
    } else {
      CHECK(got.threshold == doctest::Approx(want.threshold));
    }
    CHECK(stump_error(x, y, w, got.feature_index, got.threshold, got.polarity) ==
          doctest::Approx(got.weighted_error).epsilon(1e-12));
  }
}

TEST_CASE("equal-error stumps resolve to the earliest feature") {
  const FeatureMatrix x = test::matrix({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  const std::vector<Label> y{Label::Bad, Label::Bad, Label::Good, Label::Good};
  const std::vector<double> w(4, 0.25);
  const StumpFit fit = stump_search(x, y, w);
  CHECK(fit.feature_index == 0);
  CHECK(fit.threshold == 1.5);
  CHECK(fit.polarity == 1);
  CHECK(fit.weighted_error == 0.0);
}

TEST_CASE("a separable 1-D problem needs a single stump") {
  const FeatureMatrix x = test::matrix({{1}, {2}, {3}, {4}});
  const std::vector<Label> y{Label::Bad, Label::Bad, Label::Good, Label::Good};
  AdaBoostTrace trace;
  const AdaBoostModel m = adaboost_train(x, y, {90}, &trace);
  REQUIRE(m.stumps.size() == 1);
  CHECK(m.stumps[0].threshold == 2.5);
  CHECK(m.stumps[0].polarity == 1);
  CHECK(trace.errors == std::vector<double>{0.0});
  for (std::size_t i = 0; i < 4; ++i) CHECK((m.score(x.row(i)) > 0) == (y[i] == Label::Good));
}

TEST_CASE("training error obeys the exponential-loss bound") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 30 + rng.index(30);
    const FeatureMatrix x = test::random_matrix(rng, n, 3);
    const std::vector<Label> y = test::random_labels(rng, n);
    AdaBoostTrace trace;
    const AdaBoostModel m = adaboost_train(x, y, {40}, &trace);
    REQUIRE(trace.errors.size() == m.stumps.size());
    double bound = 1.0;
    for (double e : trace.errors) bound *= 2.0 * std::sqrt(e * (1.0 - e));
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) wrong += (m.score(x.row(i)) > 0) != (y[i] == Label::Good);
    CHECK(double(wrong) / n <= bound + 1e-12);
    for (std::size_t r = 0; r < m.stumps.size(); ++r) {
      CHECK(m.stumps[r].alpha == doctest::Approx(adaboost_alpha(trace.errors[r])));
    }
  }
}

TEST_CASE("training predictions are invariant to monotone feature transforms") {
  Rng rng(29);
  const std::size_t n = 50;
  const FeatureMatrix x = test::random_matrix(rng, n, 4);
  FeatureMatrix fx(n, 4);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < 4; ++k) fx(i, k) = std::exp(3.0 * x(i, k)) + 7.0;
  const std::vector<Label> y = test::random_labels(rng, n);
  const AdaBoostModel a = adaboost_train(x, y, {25});
  const AdaBoostModel b = adaboost_train(fx, y, {25});
  REQUIRE(a.stumps.size() == b.stumps.size());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(a.score(x.row(i)) == doctest::Approx(b.score(fx.row(i))));
  }
}

TEST_CASE("rounds cap the ensemble and inputs are validated") {
  Rng rng(31);
  const FeatureMatrix x = test::random_matrix(rng, 40, 3);
  const std::vector<Label> y = test::random_labels(rng, 40);
  CHECK(adaboost_train(x, y, {5}).stumps.size() <= 5);
  CHECK_THROWS_AS(adaboost_train(x, y, {0}), InvalidArgument);
  CHECK_THROWS_AS(adaboost_train(x, std::vector<Label>(40, Label::Good), {5}), InvalidArgument);
  const AdaBoostModel m = adaboost_train(x, y, {5});
  const double short_x[] = {1.0};
  CHECK_THROWS_AS(m.score(short_x), InvalidArgument);
}
