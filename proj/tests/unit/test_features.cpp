#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lamq/error.hpp"
#include "lamq/features.hpp"
#include "lamq/syndata.hpp"
#include "test_support.hpp"

using namespace lamq;
constexpr double kPi = std::numbers::pi;

namespace {

/// Orthonormal DCT-III, the inverse of the orthonormal DCT-II.
std::vector<double> inverse_dct(const std::vector<double>& X) {
  const std::size_t T = X.size();
  std::vector<double> x(T, 0.0);
  for (std::size_t k = 0; k < T; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < T; ++m) {
      const double c = m == 0 ? std::sqrt(1.0 / T) : std::sqrt(2.0 / T);
      acc += c * X[m] * std::cos(kPi * (2.0 * k + 1.0) * m / (2.0 * T));
    }
    x[k] = acc;
  }
  return x;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Vec3 rotate(const Vec3& p, double yaw, double pitch) {
  const double x1 = std::cos(yaw) * p[0] + std::sin(yaw) * p[2];
  const double z1 = -std::sin(yaw) * p[0] + std::cos(yaw) * p[2];
  const double y2 = std::cos(pitch) * p[1] - std::sin(pitch) * z1;
  const double z2 = std::sin(pitch) * p[1] + std::cos(pitch) * z1;
  return {x1, y2, z2};
}

/// Straight standing T-pose: arms horizontal, legs vertical.
Frame t_pose() {
  Frame f;
  f[JointId::HipCenter] = {0, 0, 0};
  f[JointId::Spine] = {0, 0.2, 0};
  f[JointId::ShoulderCenter] = {0, 0.5, 0};
  f[JointId::Head] = {0, 0.7, 0};
  for (double side : {1.0, -1.0}) {
    const bool left = side > 0;
    f[left ? JointId::ShoulderLeft : JointId::ShoulderRight] = {0.2 * side, 0.45, 0};
    f[left ? JointId::ElbowLeft : JointId::ElbowRight] = {0.5 * side, 0.45, 0};
    f[left ? JointId::WristLeft : JointId::WristRight] = {0.75 * side, 0.45, 0};
    f[left ? JointId::HandLeft : JointId::HandRight] = {0.85 * side, 0.45, 0};
    f[left ? JointId::HipLeft : JointId::HipRight] = {0.1 * side, -0.05, 0};
    f[left ? JointId::KneeLeft : JointId::KneeRight] = {0.1 * side, -0.5, 0};
    f[left ? JointId::AnkleLeft : JointId::AnkleRight] = {0.1 * side, -0.9, 0};
    f[left ? JointId::FootLeft : JointId::FootRight] = {0.1 * side, -0.95, 0.1};
  }
  return f;
}

SkeletonSample constant_sample(const Frame& f, std::size_t frames) {
  SkeletonSample s;
  s.frames.assign(frames, f);
  return s;
}

}  // namespace

TEST_CASE("representation names and dimensions") {
  for (Representation r : kAllRepresentations) {
    CHECK(parse_representation(representation_name(r)) == r);
  }
  CHECK(representation_name(Representation::JointTime) == "joint-time");
  CHECK_FALSE(parse_representation("joint").has_value());
  CHECK(feature_dimension(Representation::JointTime, 160) == 9600);
  CHECK(feature_dimension(Representation::JointFreq, 160) == 9600);
  CHECK(feature_dimension(Representation::AngleTime, 160) == 1600);
  CHECK(feature_dimension(Representation::AngleFreq, 160) == 1600);
  CHECK(is_frequency(Representation::AngleFreq));
  CHECK_FALSE(is_frequency(Representation::JointTime));
  CHECK(time_domain_of(Representation::JointFreq) == Representation::JointTime);
  CHECK(frequency_domain_of(Representation::AngleTime) == Representation::AngleFreq);
}

TEST_CASE("angle triples follow the documented layout") {
  CHECK(angle_triple(AngleId::KneeLeft).vertex == JointId::KneeLeft);
  CHECK(angle_triple(AngleId::ElbowRight).a == JointId::ShoulderRight);
  CHECK(angle_triple(AngleId::ElbowRight).c == JointId::WristRight);
  CHECK(angle_triple(AngleId::FemurSpineLeft).vertex == JointId::HipLeft);
  CHECK(angle_triple(AngleId::FemurSpineLeft).a == JointId::KneeLeft);
  CHECK(angle_triple(AngleId::FemurSpineLeft).c == JointId::Spine);
  CHECK(angle_triple(AngleId::ElbowShoulderHipRight).vertex == JointId::ShoulderRight);
  CHECK(angle_triple(AngleId::ElbowShoulderHipRight).c == JointId::HipCenter);
  CHECK(angle_triple(AngleId::ElbowShoulderShoulderLeft).c == JointId::ShoulderRight);
  CHECK(angle_triple(AngleId::ElbowShoulderShoulderRight).c == JointId::ShoulderLeft);
}

TEST_CASE("angle_between on textbook cases") {
  CHECK(angle_between({1, 0, 0}, {0, 0, 0}, {0, 1, 0}) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(angle_between({1, 0, 0}, {0, 0, 0}, {-1, 0, 0}) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(angle_between({1, 0, 0}, {0, 0, 0}, {1, 1, 0}) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(angle_between({2, 0, 0}, {0, 0, 0}, {5, 0, 0}) == 0.0);
  CHECK_THROWS_AS(angle_between({1, 1, 1}, {1, 1, 1}, {0, 1, 0}), InvalidArgument);
  CHECK_THROWS_AS(angle_between({1, 0, 0}, {0, 0, 0}, {0, 0, 1e-12}), InvalidArgument);
}

TEST_CASE("angle_between is symmetric and invariant to similarity transforms") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Vec3 b{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Vec3 c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double theta = angle_between(a, b, c);
    CHECK(theta >= 0.0);
    CHECK(theta <= kPi);
    CHECK(angle_between(c, b, a) == theta);

    const double yaw = rng.uniform(0, 2 * kPi), pitch = rng.uniform(0, 2 * kPi);
    const double s = rng.uniform(0.1, 10.0);
    const Vec3 t{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    auto map = [&](const Vec3& p) {
      const Vec3 r = rotate(p, yaw, pitch);
      return Vec3{s * r[0] + t[0], s * r[1] + t[1], s * r[2] + t[2]};
    };
    CHECK(std::abs(angle_between(map(a), map(b), map(c)) - theta) < 1e-9);
  }
}

TEST_CASE("flatten_joints is frame-major") {
  Rng rng(2);
  const SkeletonSample s = test::random_sample(rng, 160);
  const FeatureVector v = flatten_joints(s, 160);
  REQUIRE(v.values.size() == 9600);
  CHECK(v.rep == Representation::JointTime);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = rng.index(160), j = rng.index(20);
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(v.values[3 * (20 * k + j) + c] == s.frames[k].joints[j][c]);
    }
  }
  const FeatureVector zero = flatten_joints(constant_sample(Frame{}, 160), 160);
  for (double x : zero.values) CHECK(x == 0.0);
  CHECK_THROWS_AS(flatten_joints(s, 150), InvalidArgument);
}

TEST_CASE("compute_angles on a T-pose") {
  const FeatureVector v = compute_angles(constant_sample(t_pose(), 160), 160);
  REQUIRE(v.values.size() == 1600);
  CHECK(v.rep == Representation::AngleTime);
  for (std::size_t k = 0; k < 160; ++k) {
    const double* a = v.values.data() + 10 * k;
    CHECK(a[static_cast<int>(AngleId::KneeLeft)] == doctest::Approx(kPi));
    CHECK(a[static_cast<int>(AngleId::KneeRight)] == doctest::Approx(kPi));
    CHECK(a[static_cast<int>(AngleId::ElbowLeft)] == doctest::Approx(kPi));
    CHECK(a[static_cast<int>(AngleId::ElbowRight)] == doctest::Approx(kPi));
    CHECK(a[static_cast<int>(AngleId::ElbowShoulderShoulderLeft)] == doctest::Approx(kPi));
  }
}

TEST_CASE("compute_angles: perpendicular forearm gives a right elbow angle") {
  Frame f = t_pose();
  f[JointId::WristLeft] = {0.5, 0.45, 0.25};  // forearm points forward
  const FeatureVector v = compute_angles(constant_sample(f, 4), 4);
  CHECK(std::abs(v.values[static_cast<int>(AngleId::ElbowLeft)] - kPi / 2) < 1e-9);
}

TEST_CASE("compute_angles names the degenerate triple") {
  Frame f = t_pose();
  f[JointId::ElbowRight] = f[JointId::WristRight];
  SkeletonSample s = constant_sample(t_pose(), 5);
  s.frames[3] = f;
  try {
    compute_angles(s, 5);
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ElbowRight") != std::string::npos);
    CHECK(msg.find("frame 3") != std::string::npos);
  }
}

TEST_CASE("DCT-II of a constant channel is pure DC") {
  const std::size_t T = 160;
  const std::vector<double> x(T, 2.5);
  const auto X = dct_ii(x);
  CHECK(std::abs(X[0] - 2.5 * std::sqrt(double(T))) < 1e-12);
  for (std::size_t m = 1; m < T; ++m) CHECK(std::abs(X[m]) < 1e-12);
}

TEST_CASE("DCT-II of a basis function has one coefficient") {
  const std::size_t T = 64;
  std::vector<double> x(T);
  for (std::size_t k = 0; k < T; ++k) {
    x[k] = std::sqrt(2.0 / T) * std::cos(kPi * (2.0 * k + 1.0) * 3.0 / (2.0 * T));
  }
  const auto X = dct_ii(x);
  for (std::size_t m = 0; m < T; ++m) CHECK(std::abs(X[m] - (m == 3 ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("DCT-II inverts through DCT-III and preserves the norm") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t T = 1 + rng.index(200);
    std::vector<double> x(T);
    for (double& v : x) v = rng.uniform(-3, 3);
    const auto X = dct_ii(x);
    CHECK(test::max_abs_diff(inverse_dct(X), x) < 1e-9);
    CHECK(std::abs(norm(X) - norm(x)) <= 1e-9 * norm(x));
  }
}

TEST_CASE("dct_transform lays coefficients out channel-major") {
  Rng rng(4);
  const SkeletonSample s = test::random_sample(rng, 20);
  const FeatureVector time = flatten_joints(s, 20);
  const FeatureVector freq = dct_transform(time);
  CHECK(freq.rep == Representation::JointFreq);
  REQUIRE(freq.values.size() == time.values.size());
  for (std::size_t ch : {0u, 17u, 59u}) {
    std::vector<double> series(20);
    for (std::size_t k = 0; k < 20; ++k) series[k] = time.values[60 * k + ch];
    const auto X = dct_ii(series);
    for (std::size_t m = 0; m < 20; ++m) CHECK(freq.values[20 * ch + m] == X[m]);
  }
  CHECK(dct_transform(compute_angles(s, 20)).rep == Representation::AngleFreq);
}

TEST_CASE("extract_features has the documented dimension for every representation") {
  const MotionTemplate m = builtin_template(Exercise::BlastOff);
  SkeletonSample s;
  for (int k = 0; k < 160; ++k) s.frames.push_back(m.pose_at(k / 159.0));
  for (Representation r : kAllRepresentations) {
    const FeatureVector v = extract_features(s, r, 160);
    CHECK(v.rep == r);
    CHECK(v.values.size() == feature_dimension(r, 160));
    for (double x : v.values) REQUIRE(std::isfinite(x));
  }
}

TEST_CASE("FeatureMatrix selects rows") {
  std::vector<FeatureVector> vs(3);
  for (int i = 0; i < 3; ++i) vs[i].values = {double(i), double(10 * i)};
  const FeatureMatrix m = FeatureMatrix::from_vectors(vs);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m(2, 1) == 20.0);
  const std::size_t pick[] = {2, 0};
  const FeatureMatrix s = m.select_rows(pick);
  CHECK(s(0, 0) == 2.0);
  CHECK(s(1, 1) == 0.0);
  vs[1].values.push_back(1.0);
  CHECK_THROWS_AS(FeatureMatrix::from_vectors(vs), InvalidArgument);
}
