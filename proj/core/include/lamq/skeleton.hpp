#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lamq {

/// The 20 joints tracked by a first-generation Kinect, in their stable
/// integer encoding. Feature layouts index joints in this order.
enum class JointId : std::uint8_t {
  HipCenter = 0,
  Spine,
  ShoulderCenter,
  Head,
  ShoulderLeft,
  ElbowLeft,
  WristLeft,
  HandLeft,
  ShoulderRight,
  ElbowRight,
  WristRight,
  HandRight,
  HipLeft,
  KneeLeft,
  AnkleLeft,
  FootLeft,
  HipRight,
  KneeRight,
  AnkleRight,
  FootRight,
};

inline constexpr std::size_t kJointCount = 20;

constexpr std::size_t index(JointId j) noexcept { return static_cast<std::size_t>(j); }
std::string_view joint_name(JointId j) noexcept;

using Vec3 = std::array<double, 3>;

/// One time step: a position per joint, indexed by JointId.
struct Frame {
  std::array<Vec3, kJointCount> joints{};

  Vec3& operator[](JointId j) noexcept { return joints[index(j)]; }
  const Vec3& operator[](JointId j) const noexcept { return joints[index(j)]; }

  bool operator==(const Frame&) const = default;
};

/// Good repetitions are the positive class (+1), Bad the negative (-1).
enum class Label : int { Bad = -1, Good = 1 };

constexpr int sign(Label l) noexcept { return static_cast<int>(l); }
std::string_view label_name(Label l) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

enum class Exercise : std::uint8_t { BlastOff, BodyBuilder, FinishLine, ReachForTheStars, TakeABow };

inline constexpr std::array<Exercise, 5> kAllExercises = {
    Exercise::BlastOff, Exercise::BodyBuilder, Exercise::FinishLine, Exercise::ReachForTheStars,
    Exercise::TakeABow};

/// Canonical display name, e.g. "Blast-Off".
std::string_view exercise_name(Exercise e) noexcept;
/// Accepts the canonical name in any letter case ("blast-off", "Blast-Off").
std::optional<Exercise> parse_exercise(std::string_view text) noexcept;

/// One recorded repetition of an exercise.
struct SkeletonSample {
  int subject_id = 0;
  Exercise exercise = Exercise::BlastOff;
  Label label = Label::Good;
  std::vector<Frame> frames;

  bool operator==(const SkeletonSample&) const = default;
};

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks the sample invariants; problems are reported, never thrown.
ValidationResult validate_sample(const SkeletonSample& sample);

struct Dataset {
  std::vector<SkeletonSample> samples;
  std::string provenance;
  /// True once every sample went through the preprocessing pipeline.
  bool preprocessed = false;
};

}  // namespace lamq
