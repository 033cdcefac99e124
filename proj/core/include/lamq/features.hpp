#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lamq/skeleton.hpp"

namespace lamq {

enum class Representation { JointTime, AngleTime, JointFreq, AngleFreq };

inline constexpr std::array<Representation, 4> kAllRepresentations = {
    Representation::JointTime, Representation::AngleTime, Representation::JointFreq,
    Representation::AngleFreq};

/// "joint-time", "angle-time", "joint-freq", "angle-freq".
std::string_view representation_name(Representation rep) noexcept;
std::optional<Representation> parse_representation(std::string_view text) noexcept;

constexpr bool is_frequency(Representation rep) noexcept {
  return rep == Representation::JointFreq || rep == Representation::AngleFreq;
}

constexpr Representation time_domain_of(Representation rep) noexcept {
  switch (rep) {
    case Representation::JointFreq: return Representation::JointTime;
    case Representation::AngleFreq: return Representation::AngleTime;
    default: return rep;
  }
}

constexpr Representation frequency_domain_of(Representation rep) noexcept {
  switch (rep) {
    case Representation::JointTime: return Representation::JointFreq;
    case Representation::AngleTime: return Representation::AngleFreq;
    default: return rep;
  }
}

inline constexpr std::size_t kJointChannels = 3 * kJointCount;
inline constexpr std::size_t kAngleCount = 10;

/// Per-frame channel count: 60 coordinates or 10 angles.
constexpr std::size_t channel_count(Representation rep) noexcept {
  return (rep == Representation::JointTime || rep == Representation::JointFreq) ? kJointChannels
                                                                                 : kAngleCount;
}

constexpr std::size_t feature_dimension(Representation rep, std::size_t frames) noexcept {
  return channel_count(rep) * frames;
}

/// Angles per frame, in feature order. Each is measured at the middle joint
/// of the listed triple.
enum class AngleId : std::uint8_t {
  KneeLeft,                    // HipLeft - KneeLeft - AnkleLeft
  KneeRight,                   // HipRight - KneeRight - AnkleRight
  ElbowLeft,                   // ShoulderLeft - ElbowLeft - WristLeft
  ElbowRight,                  // ShoulderRight - ElbowRight - WristRight
  FemurSpineLeft,              // KneeLeft - HipLeft - Spine
  FemurSpineRight,             // KneeRight - HipRight - Spine
  ElbowShoulderHipLeft,        // ElbowLeft - ShoulderLeft - HipCenter
  ElbowShoulderHipRight,       // ElbowRight - ShoulderRight - HipCenter
  ElbowShoulderShoulderLeft,   // ElbowLeft - ShoulderLeft - ShoulderRight
  ElbowShoulderShoulderRight,  // ElbowRight - ShoulderRight - ShoulderLeft
};

struct AngleTriple {
  JointId a, vertex, c;
};

AngleTriple angle_triple(AngleId id) noexcept;
std::string_view angle_name(AngleId id) noexcept;

struct FeatureVector {
  std::vector<double> values;
  Representation rep = Representation::JointTime;
  std::string source;
};

/// Rays shorter than this are rejected as degenerate.
inline constexpr double kDegenerateRay = 1e-9;

/// Angle at `b` between rays b->a and b->c, in [0, pi]. The cosine is clamped
/// to [-1, 1]. Throws InvalidArgument when either ray is degenerate.
double angle_between(const Vec3& a, const Vec3& b, const Vec3& c);

/// Frame-major (x, y, z) per joint in JointId order.
/// Throws InvalidArgument if the sample does not have `frames` frames.
FeatureVector flatten_joints(const SkeletonSample& sample, std::size_t frames);

/// Frame-major AngleId values, radians.
FeatureVector compute_angles(const SkeletonSample& sample, std::size_t frames);

/// Orthonormal DCT-II of one channel.
std::vector<double> dct_ii(std::span<const double> signal);

/// Replaces each channel's time series with its orthonormal DCT-II
/// coefficients. Input is frame-major, output is channel-major.
FeatureVector dct_transform(const FeatureVector& time_features);

/// Full extraction from a preprocessed sample.
FeatureVector extract_features(const SkeletonSample& sample, Representation rep,
                               std::size_t frames);

/// Dense row-major matrix of feature vectors (one row per sample).
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static FeatureMatrix from_vectors(std::span<const FeatureVector> vectors);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }

  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace lamq
