#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "lamq/skeleton.hpp"

namespace lamq {

struct Keyframe {
  double phase_time = 0.0;  // in [0, 1]
  Frame pose;
};

/// Keyframed exercise; consecutive keyframes are blended with smoothstep
/// easing. Coordinates are meters, Y up, floor at y = 0, subject facing +Z.
struct MotionTemplate {
  Exercise exercise = Exercise::BlastOff;
  std::vector<Keyframe> keyframes;

  /// Throws InvalidArgument unless phase times start at 0, end at 1 and
  /// strictly increase, with at least two keyframes.
  void validate() const;

  /// Eased pose at normalized time t in [0, 1].
  Frame pose_at(double t) const;
};

enum class Limb { ArmLeft, ArmRight, Both };

/// Arm does not reach full extension: the shoulder-to-wrist vector is
/// scaled by `factor`.
struct RestrictedExtension {
  Limb limb = Limb::Both;
  double factor = 0.6;
};

/// Keyframe `phase_index` is only partially reached: it is replaced by
/// predecessor + completion * (keyframe - predecessor).
struct IncompletePhase {
  std::size_t phase_index = 1;
  double completion = 0.5;
};

/// Monotone warp of the time axis with peak deviation bounded by `magnitude`.
struct TempoJitter {
  double magnitude = 0.1;
};

using ErrorSpec = std::variant<RestrictedExtension, IncompletePhase, TempoJitter>;

struct SubjectProfile {
  int subject_id = 1;
  double height_scale = 1.0;
  Vec3 camera_offset{0.0, 0.0, 0.0};
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
};

/// Hand-authored templates. Blast-Off follows the three published phases
/// (seated arms forward, seated arms swung back, standing arms overhead);
/// the other four are illustrative.
MotionTemplate builtin_template(Exercise exercise);

/// Samples the template at n_frames uniform times and applies, in order:
/// tempo warp, incomplete phases, restricted extension, height scaling about
/// the floor origin, Gaussian joint noise and the camera offset.
/// Label is Good iff `errors` is empty. Throws InvalidArgument on bad input.
SkeletonSample generate_sample(const MotionTemplate& motion, const SubjectProfile& profile,
                               std::span<const ErrorSpec> errors, std::size_t n_frames);

/// Parameter ranges used when drawing random errors and profiles.
struct GeneratorRanges {
  double height_lo = 0.85, height_hi = 1.2;
  double noise_lo = 0.004, noise_hi = 0.012;
  double factor_lo = 0.4, factor_hi = 0.8;
  double completion_lo = 0.3, completion_hi = 0.7;
  double jitter_lo = 0.05, jitter_hi = 0.2;
  std::size_t frames_lo = 90, frames_hi = 240;
};

/// Seeded error draw: one of the three kinds, parameters within `ranges`.
ErrorSpec draw_error(const MotionTemplate& motion, std::uint64_t seed,
                     const GeneratorRanges& ranges = {});

SubjectProfile draw_profile(int subject_id, std::uint64_t seed, const GeneratorRanges& ranges = {});

struct GeneratedSample {
  SkeletonSample sample;
  std::vector<ErrorSpec> errors;
};

/// Subjects are numbered from 1. For subject s the negatives come first,
/// then the positives; every sample uses a seed derived from
/// (base_seed, subject, sample index).
std::vector<GeneratedSample> generate_samples(const MotionTemplate& motion,
                                              std::span<const std::size_t> pos_per_subject,
                                              std::span<const std::size_t> neg_per_subject,
                                              std::uint64_t base_seed,
                                              const GeneratorRanges& ranges = {});

Dataset generate_dataset(const MotionTemplate& motion, std::span<const std::size_t> pos_per_subject,
                         std::span<const std::size_t> neg_per_subject, std::uint64_t base_seed,
                         const GeneratorRanges& ranges = {});

/// Per-subject Blast-Off counts: 11,13,10,14,15 good and
/// 10,13,10,14,15 bad (125 samples).
inline constexpr std::size_t kBlastOffGood[] = {11, 13, 10, 14, 15};
inline constexpr std::size_t kBlastOffBad[] = {10, 13, 10, 14, 15};

}  // namespace lamq
