#include <benchmark/benchmark.h>

#include <numeric>

#include "lamq/classifiers/adaboost.hpp"
#include "lamq/classifiers/dtw.hpp"
#include "lamq/classifiers/nn.hpp"
#include "lamq/features.hpp"
#include "lamq/preprocess.hpp"
#include "lamq/rng.hpp"
#include "lamq/syndata.hpp"

namespace {

lamq::FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  lamq::Rng rng(seed);
  lamq::FeatureMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (double& v : m.row(i)) v = rng.uniform(-1.0, 1.0);
  return m;
}

std::vector<lamq::Label> alternating_labels(std::size_t n) {
  std::vector<lamq::Label> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = i % 2 ? lamq::Label::Good : lamq::Label::Bad;
  return y;
}

void BM_DtwJointTime(benchmark::State& state) {
  const auto m = random_matrix(2, 9600, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lamq::dtw_distance({m.row(0), 60}, {m.row(1), 60}));
  }
}
BENCHMARK(BM_DtwJointTime)->Unit(benchmark::kMillisecond);

void BM_StumpSearch(benchmark::State& state) {
  const auto cols = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(80, cols, 2);
  const auto y = alternating_labels(80);
  const std::vector<double> w(80, 1.0 / 80);
  for (auto _ : state) benchmark::DoNotOptimize(lamq::stump_search(x, y, w));
}
BENCHMARK(BM_StumpSearch)->Arg(1600)->Arg(9600)->Unit(benchmark::kMillisecond);

void BM_AdaBoostTrain(benchmark::State& state) {
  const auto x = random_matrix(80, 1600, 3);
  const auto y = alternating_labels(80);
  for (auto _ : state) benchmark::DoNotOptimize(lamq::adaboost_train(x, y, {90}));
}
BENCHMARK(BM_AdaBoostTrain)->Unit(benchmark::kMillisecond);

void BM_Dct160(benchmark::State& state) {
  std::vector<double> x(160);
  std::iota(x.begin(), x.end(), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(lamq::dct_ii(x));
}
BENCHMARK(BM_Dct160);

void BM_FeaturesFromSample(benchmark::State& state) {
  const auto motion = lamq::builtin_template(lamq::Exercise::BlastOff);
  lamq::SubjectProfile profile;
  profile.noise_sd = 0.01;
  const auto raw = lamq::generate_sample(motion, profile, {}, 150);
  const auto sample = lamq::preprocess_sample(raw, {});
  const auto rep = static_cast<lamq::Representation>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lamq::extract_features(sample, rep, 160));
}
BENCHMARK(BM_FeaturesFromSample)->DenseRange(0, 3);

void BM_NnEpoch(benchmark::State& state) {
  const auto x = random_matrix(80, 9600, 4);
  const auto y = alternating_labels(80);
  lamq::NnConfig config;
  config.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lamq::nn_train(x, y, config));
}
BENCHMARK(BM_NnEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
