#pragma once

#include <cstddef>

#include "lamq/skeleton.hpp"

namespace lamq {

/// Vertical extents at or below this are treated as degenerate.
inline constexpr double kDegenerateExtent = 1e-9;

struct PreprocessConfig {
  std::size_t target_frames = 160;
  double scale_lo = 1.0;
  double scale_hi = 3.0;
  /// Map each axis to [scale_lo, scale_hi] independently instead of one
  /// uniform factor taken from the vertical extent.
  bool per_axis_scaling = false;

  /// Throws InvalidArgument unless target_frames >= 2 and scale_lo < scale_hi.
  void validate() const;
};

/// Piecewise-linear resampling over normalized time. Output frame k sits at
/// t = k / (target_frames - 1); the first and last frames are copied exactly.
SkeletonSample resample(const SkeletonSample& sample, std::size_t target_frames);

/// Uniform scaling of all three axes by s = (hi - lo) / (maxY - minY) over the
/// whole sample. Y maps onto [lo, hi]; X and Z midpoints map to (lo + hi) / 2.
SkeletonSample height_scale(const SkeletonSample& sample, double lo, double hi);

/// Per-axis min-max scaling of X, Y and Z onto [lo, hi].
SkeletonSample per_axis_scale(const SkeletonSample& sample, double lo, double hi);

/// Subtracts the HipCenter position from every joint, frame by frame.
SkeletonSample hip_center_relative(const SkeletonSample& sample);

/// resample -> scale -> hip_center_relative.
SkeletonSample preprocess_sample(const SkeletonSample& sample, const PreprocessConfig& config);

/// Applies preprocess_sample to every sample and marks the result preprocessed.
/// Throws InvalidArgument if the input is already preprocessed.
Dataset preprocess_dataset(const Dataset& dataset, const PreprocessConfig& config);

}  // namespace lamq
