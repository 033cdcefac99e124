#include "lamq/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lamq/error.hpp"

namespace lamq {

namespace {

struct AxisRange {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  double extent() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

std::array<AxisRange, 3> coordinate_ranges(const SkeletonSample& sample) {
  std::array<AxisRange, 3> ranges;
  for (const Frame& frame : sample.frames) {
    for (const Vec3& p : frame.joints) {
      for (std::size_t a = 0; a < 3; ++a) {
        ranges[a].lo = std::min(ranges[a].lo, p[a]);
        ranges[a].hi = std::max(ranges[a].hi, p[a]);
      }
    }
  }
  return ranges;
}

}  // namespace

void PreprocessConfig::validate() const {
  if (target_frames < 2) throw InvalidArgument("target_frames must be at least 2");
  if (!(scale_lo < scale_hi)) throw InvalidArgument("scale_lo must be below scale_hi");
}

SkeletonSample resample(const SkeletonSample& sample, std::size_t target_frames) {
  const std::size_t n = sample.frames.size();
  if (n < 2) throw InvalidArgument("resample needs at least 2 frames, got " + std::to_string(n));
  if (target_frames < 2) throw InvalidArgument("target_frames must be at least 2");

  SkeletonSample out = sample;
  out.frames.assign(target_frames, Frame{});
  out.frames.front() = sample.frames.front();
  out.frames.back() = sample.frames.back();
  const double span = static_cast<double>(n - 1);
  for (std::size_t k = 1; k + 1 < target_frames; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(target_frames - 1) * span;
    std::size_t i = std::min(static_cast<std::size_t>(u), n - 2);
    const double w = u - static_cast<double>(i);
    const Frame& a = sample.frames[i];
    const Frame& b = sample.frames[i + 1];
    Frame& dst = out.frames[k];
    for (std::size_t j = 0; j < kJointCount; ++j) {
      for (std::size_t c = 0; c < 3; ++c) {
        const double va = a.joints[j][c];
        const double vb = b.joints[j][c];
        dst.joints[j][c] = va == vb ? va : (1.0 - w) * va + w * vb;
      }
    }
  }
  return out;
}

SkeletonSample height_scale(const SkeletonSample& sample, double lo, double hi) {
  if (sample.frames.empty()) throw InvalidArgument("height_scale on an empty sample");
  const auto ranges = coordinate_ranges(sample);
  const double extent = ranges[1].extent();
  if (!(extent > kDegenerateExtent)) {
    throw InvalidArgument("degenerate vertical extent (" + std::to_string(extent) + ")");
  }
  const double s = (hi - lo) / extent;
  const double mid = 0.5 * (lo + hi);

  SkeletonSample out = sample;
  for (Frame& frame : out.frames) {
    for (Vec3& p : frame.joints) {
      p[0] = mid + s * (p[0] - ranges[0].mid());
      p[1] = lo + s * (p[1] - ranges[1].lo);
      p[2] = mid + s * (p[2] - ranges[2].mid());
    }
  }
  return out;
}

SkeletonSample per_axis_scale(const SkeletonSample& sample, double lo, double hi) {
  if (sample.frames.empty()) throw InvalidArgument("per_axis_scale on an empty sample");
  const auto ranges = coordinate_ranges(sample);
  std::array<double, 3> factor{};
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(ranges[a].extent() > kDegenerateExtent)) {
      throw InvalidArgument("degenerate extent on axis " + std::to_string(a));
    }
    factor[a] = (hi - lo) / ranges[a].extent();
  }
  SkeletonSample out = sample;
  for (Frame& frame : out.frames) {
    for (Vec3& p : frame.joints) {
      for (std::size_t a = 0; a < 3; ++a) {
        p[a] = lo + factor[a] * (p[a] - ranges[a].lo);
      }
    }
  }
  return out;
}

SkeletonSample hip_center_relative(const SkeletonSample& sample) {
  SkeletonSample out = sample;
  for (Frame& frame : out.frames) {
    const Vec3 hip = frame[JointId::HipCenter];
    for (Vec3& p : frame.joints) {
      p[0] -= hip[0];
      p[1] -= hip[1];
      p[2] -= hip[2];
    }
  }
  return out;
}

SkeletonSample preprocess_sample(const SkeletonSample& sample, const PreprocessConfig& config) {
  config.validate();
  SkeletonSample out = resample(sample, config.target_frames);
  out = config.per_axis_scaling ? per_axis_scale(out, config.scale_lo, config.scale_hi)
                                : height_scale(out, config.scale_lo, config.scale_hi);
  return hip_center_relative(out);
}

Dataset preprocess_dataset(const Dataset& dataset, const PreprocessConfig& config) {
  if (dataset.preprocessed) throw InvalidArgument("dataset is already preprocessed");
  config.validate();
  Dataset out;
  out.provenance = dataset.provenance;
  out.preprocessed = true;
  out.samples.reserve(dataset.samples.size());
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    try {
      out.samples.push_back(preprocess_sample(dataset.samples[i], config));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace lamq
