#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lamq/classifiers/model.hpp"
#include "lamq/error.hpp"
#include "test_support.hpp"

using namespace lamq;

namespace {

/// Small angle-time problem: 3 frames of 10 angles, Good rows shifted up.
void toy_data(Rng& rng, FeatureMatrix& x, std::vector<Label>& y) {
  const std::size_t n = 24;
  x = FeatureMatrix(n, feature_dimension(Representation::AngleTime, 3));
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i % 3 == 0 ? Label::Bad : Label::Good;
    const double shift = y[i] == Label::Good ? 1.0 : 0.0;
    for (double& v : x.row(i)) v = shift + rng.uniform(-0.3, 0.3);
  }
}

}  // namespace

TEST_CASE("classifier names") {
  for (const char* name : {"svm", "svdd", "adaboost", "dtw", "nn", "mnn"}) {
    auto spec = ClassifierSpec::from_name(name);
    REQUIRE(spec.has_value());
    CHECK(spec->name() == name);
  }
  CHECK(ClassifierSpec::from_name("mnn")->nn.hidden_sizes == std::vector<std::size_t>{500, 100});
  CHECK(ClassifierSpec::from_name("nn")->nn.hidden_sizes == std::vector<std::size_t>{500});
  CHECK_FALSE(ClassifierSpec::from_name("forest").has_value());
  CHECK(family_name(Family::AdaBoost) == "adaboost");
}

TEST_CASE("a zero score predicts Bad") {
  TrainedModel m;
  LinearSvmModel svm;
  svm.weights = {1.0, -1.0};
  m.params = svm;
  const double tie[] = {2.0, 2.0}, up[] = {2.0, 1.0}, down[] = {1.0, 2.0};
  CHECK(predict(m, tie).label == Label::Bad);
  CHECK(predict(m, tie).score == 0.0);
  CHECK(predict(m, up).label == Label::Good);
  CHECK(predict(m, down).label == Label::Bad);
}

TEST_CASE("every family trains, predicts and round-trips through JSON") {
  Rng rng(101);
  FeatureMatrix x;
  std::vector<Label> y;
  toy_data(rng, x, y);
  for (const char* name : {"svm", "svdd", "adaboost", "dtw", "nn", "mnn"}) {
    CAPTURE(name);
    ClassifierSpec spec = *ClassifierSpec::from_name(name);
    spec.nn.hidden_sizes = std::string(name) == "mnn" ? std::vector<std::size_t>{6, 4}
                                                      : std::vector<std::size_t>{6};
    spec.nn.epochs = 3;
    spec.adaboost.rounds = 10;
    const TrainedModel m = train_model(spec, Representation::AngleTime, x, y, 7);
    CHECK(m.rep == Representation::AngleTime);
    CHECK(m.input_dim() == x.cols());

    const std::string text = model_to_json(m);
    const TrainedModel back = model_from_json(text);
    CHECK(back.family() == m.family());
    CHECK(model_to_json(back) == text);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const Prediction a = predict(m, x.row(i)), b = predict(back, x.row(i));
      CHECK(a.score == b.score);
      CHECK(a.label == b.label);
    }
  }
}

TEST_CASE("one-class families see only Good rows") {
  const FeatureMatrix x = test::matrix({{0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                                        {1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
                                        {100, 100, 100, 100, 100, 100, 100, 100, 100, 100}});
  const std::vector<Label> y{Label::Good, Label::Good, Label::Bad};
  ClassifierSpec spec = *ClassifierSpec::from_name("svdd");
  spec.svdd.nu = 1.0;
  const TrainedModel m = train_model(spec, Representation::AngleTime, x, y, 1);
  CHECK(std::get<SvddModel>(m.params).center == std::vector<double>(10, 0.5));
  const std::vector<Label> none{Label::Bad, Label::Bad, Label::Bad};
  CHECK_THROWS_AS(train_model(spec, Representation::AngleTime, x, none, 1), InvalidArgument);
}

TEST_CASE("dtw rejects frequency representations") {
  const FeatureMatrix x = test::matrix({std::vector<double>(10, 1.0), std::vector<double>(10, 0.0)});
  const std::vector<Label> y{Label::Good, Label::Bad};
  CHECK_THROWS_AS(train_model(*ClassifierSpec::from_name("dtw"), Representation::AngleFreq, x, y, 1),
                  InvalidArgument);
}

TEST_CASE("malformed model JSON is rejected") {
  CHECK_THROWS_AS(model_from_json("{"), Error);
  CHECK_THROWS_AS(model_from_json(R"({"format":"other"})"), Error);
  Rng rng(103);
  FeatureMatrix x;
  std::vector<Label> y;
  toy_data(rng, x, y);
  const TrainedModel m = train_model(*ClassifierSpec::from_name("svm"), Representation::AngleTime, x, y, 1);
  std::string text = model_to_json(m);
  const auto pos = text.find("\"svm\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "\"xyz\"");
  CHECK_THROWS_AS(model_from_json(text), Error);
}
