#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lamq/error.hpp"
#include "lamq/preprocess.hpp"
#include "test_support.hpp"

using namespace lamq;
using test::max_abs_diff;

namespace {

/// Independent piecewise-linear interpolation at normalized time t.
double interpolate(const std::vector<double>& values, double t) {
  const double pos = t * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  if (lo >= values.size() - 1) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

SkeletonSample transformed(const SkeletonSample& s, double scale, const Vec3& shift) {
  SkeletonSample out = s;
  for (Frame& f : out.frames) {
    for (Vec3& p : f.joints) {
      for (int c = 0; c < 3; ++c) p[c] = scale * p[c] + shift[c];
    }
  }
  return out;
}

double min_y(const SkeletonSample& s) {
  double v = INFINITY;
  for (const Frame& f : s.frames) for (const Vec3& p : f.joints) v = std::min(v, p[1]);
  return v;
}

double max_y(const SkeletonSample& s) {
  double v = -INFINITY;
  for (const Frame& f : s.frames) for (const Vec3& p : f.joints) v = std::max(v, p[1]);
  return v;
}

}  // namespace

TEST_CASE("config validation") {
  PreprocessConfig c;
  CHECK_NOTHROW(c.validate());
  c.target_frames = 1;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.scale_lo = 3.0;
  c.scale_hi = 3.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("resample: constant pose stays constant") {
  Rng rng(1);
  SkeletonSample s = test::random_sample(rng, 1);
  s.frames.resize(7, s.frames[0]);
  const SkeletonSample r = resample(s, 160);
  REQUIRE(r.frames.size() == 160);
  for (const Frame& f : r.frames) CHECK(f == s.frames[0]);
}

TEST_CASE("resample: two-frame ramp gives x = k / 159") {
  SkeletonSample s;
  s.frames.resize(2);
  s.frames[1][JointId::Head] = {1.0, 0.0, 0.0};
  const SkeletonSample r = resample(s, 160);
  for (std::size_t k = 0; k < 160; ++k) {
    CHECK(std::abs(r.frames[k][JointId::Head][0] - static_cast<double>(k) / 159.0) < 1e-15);
  }
}

TEST_CASE("resample matches direct piecewise-linear interpolation") {
  SkeletonSample s;
  s.frames.resize(320);
  std::vector<double> x(320);
  for (std::size_t k = 0; k < 320; ++k) {
    x[k] = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / 319.0);
    s.frames[k][JointId::WristLeft][0] = x[k];
  }
  const SkeletonSample r = resample(s, 160);
  double worst = 0.0;
  for (std::size_t k = 0; k < 160; ++k) {
    const double expected = interpolate(x, static_cast<double>(k) / 159.0);
    worst = std::max(worst, std::abs(r.frames[k][JointId::WristLeft][0] - expected));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("resample: endpoints exact, length fixed, no overshoot") {
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t len = 2 + rng.index(499);
    const std::size_t target = 2 + rng.index(300);
    const SkeletonSample s = test::random_sample(rng, len);
    const SkeletonSample r = resample(s, target);
    REQUIRE(r.frames.size() == target);
    CHECK(r.frames.front() == s.frames.front());
    CHECK(r.frames.back() == s.frames.back());
    for (std::size_t j = 0; j < kJointCount; ++j) {
      for (int c = 0; c < 3; ++c) {
        double lo = INFINITY, hi = -INFINITY;
        for (const Frame& f : s.frames) {
          lo = std::min(lo, f.joints[j][c]);
          hi = std::max(hi, f.joints[j][c]);
        }
        for (const Frame& f : r.frames) {
          CHECK(f.joints[j][c] >= lo);
          CHECK(f.joints[j][c] <= hi);
        }
      }
    }
  }
}

TEST_CASE("resample rejects short input") {
  SkeletonSample s;
  s.frames.resize(1);
  CHECK_THROWS_AS(resample(s, 160), InvalidArgument);
}

TEST_CASE("height_scale: two points with Y extent [0, 2]") {
  SkeletonSample s;
  s.frames.resize(2);
  for (Frame& f : s.frames) for (Vec3& p : f.joints) p = {0.0, 0.0, 0.0};
  s.frames[1][JointId::Head] = {0.0, 2.0, 0.0};
  const SkeletonSample h = height_scale(s, 1.0, 3.0);
  CHECK(h.frames[0][JointId::HipCenter][1] == 1.0);
  CHECK(h.frames[1][JointId::Head][1] == 3.0);
  // s = 1 and the X/Z midpoint (0) lands on 2.
  CHECK(h.frames[1][JointId::Head][0] == 2.0);
  CHECK(h.frames[1][JointId::Head][2] == 2.0);
}

TEST_CASE("height_scale maps the Y extent exactly onto [lo, hi]") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const SkeletonSample s = test::random_sample(rng, 10);
    const double lo = rng.uniform(-2.0, 2.0);
    const double hi = lo + rng.uniform(0.5, 3.0);
    const SkeletonSample h = height_scale(s, lo, hi);
    CHECK(std::abs(min_y(h) - lo) < 1e-12);
    CHECK(std::abs(max_y(h) - hi) < 1e-12);
  }
}

TEST_CASE("height_scale leaves Y alone when it already spans [1, 3]") {
  Rng rng(4);
  SkeletonSample s = test::random_sample(rng, 5);
  for (Frame& f : s.frames) for (Vec3& p : f.joints) p[1] = 1.0 + p[1];  // Y in [1, 3)
  s.frames[0][JointId::Head][1] = 3.0;
  s.frames[0][JointId::FootLeft][1] = 1.0;
  const SkeletonSample h = height_scale(s, 1.0, 3.0);
  for (std::size_t k = 0; k < s.frames.size(); ++k) {
    for (std::size_t j = 0; j < kJointCount; ++j) {
      CHECK(std::abs(h.frames[k].joints[j][1] - s.frames[k].joints[j][1]) < 1e-15);
    }
  }
}

TEST_CASE("height_scale removes a uniform body scale") {
  Rng rng(5);
  const SkeletonSample b = test::random_sample(rng, 12);
  const SkeletonSample a = transformed(b, 1.3, {0.0, 0.0, 0.0});
  CHECK(max_abs_diff(height_scale(a, 1.0, 3.0), height_scale(b, 1.0, 3.0)) < 1e-9);
}

TEST_CASE("height_scale rejects a flat sample") {
  SkeletonSample s;
  s.frames.resize(3);
  CHECK_THROWS_AS(height_scale(s, 1.0, 3.0), InvalidArgument);
}

TEST_CASE("per-axis scaling maps every axis onto [lo, hi]") {
  Rng rng(6);
  const SkeletonSample p = per_axis_scale(test::random_sample(rng, 8), 1.0, 3.0);
  for (int c = 0; c < 3; ++c) {
    double lo = INFINITY, hi = -INFINITY;
    for (const Frame& f : p.frames) for (const Vec3& q : f.joints) {
      lo = std::min(lo, q[c]);
      hi = std::max(hi, q[c]);
    }
    CHECK(std::abs(lo - 1.0) < 1e-12);
    CHECK(std::abs(hi - 3.0) < 1e-12);
  }
}

TEST_CASE("hip_center_relative") {
  SkeletonSample s;
  s.frames.resize(2);
  s.frames[0][JointId::HipCenter] = {2.0, 3.0, 1.0};
  s.frames[0][JointId::ShoulderLeft] = {2.0, 5.0, 1.0};
  s.frames[1][JointId::HipCenter] = {-1.0, 0.5, 4.0};
  const SkeletonSample r = hip_center_relative(s);
  CHECK(r.frames[0][JointId::ShoulderLeft] == Vec3{0.0, 2.0, 0.0});
  for (const Frame& f : r.frames) CHECK(f[JointId::HipCenter] == Vec3{0.0, 0.0, 0.0});
  CHECK(hip_center_relative(r) == r);

  Rng rng(7);
  const SkeletonSample q = hip_center_relative(test::random_sample(rng, 9));
  CHECK(hip_center_relative(q) == q);
}

TEST_CASE("pipeline: 97 raw frames become 160 centered frames") {
  Rng rng(8);
  const SkeletonSample p = preprocess_sample(test::random_sample(rng, 97), {});
  REQUIRE(p.frames.size() == 160);
  for (const Frame& f : p.frames) CHECK(f[JointId::HipCenter] == Vec3{0.0, 0.0, 0.0});
}

TEST_CASE("pipeline is invariant to camera offset and body scale") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SkeletonSample s = test::random_sample(rng, 2 + rng.index(200));
    const Vec3 shift{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double scale = rng.uniform(0.5, 2.0);
    const SkeletonSample base = preprocess_sample(s, {});
    CHECK(max_abs_diff(preprocess_sample(transformed(s, 1.0, shift), {}), base) < 1e-9);
    CHECK(max_abs_diff(preprocess_sample(transformed(s, scale, {0, 0, 0}), {}), base) < 1e-9);
  }
}

TEST_CASE("preprocess_dataset marks output and refuses to run twice") {
  Rng rng(10);
  Dataset d;
  for (int i = 0; i < 3; ++i) d.samples.push_back(test::random_sample(rng, 20 + i));
  const Dataset p = preprocess_dataset(d, {});
  CHECK(p.preprocessed);
  REQUIRE(p.samples.size() == 3);
  for (const auto& s : p.samples) CHECK(s.frames.size() == 160);
  CHECK_THROWS_AS(preprocess_dataset(p, {}), InvalidArgument);

  Dataset bad = d;
  bad.samples[1].frames.resize(1);
  try {
    preprocess_dataset(bad, {});
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("sample 1") != std::string::npos);
  }
}
