#include "lamq/syndata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lamq/error.hpp"
#include "lamq/rng.hpp"

namespace lamq {

namespace {

// Segment lengths in meters for a ~1.75 m adult.
constexpr double kSpineOffset = 0.12;
constexpr double kShoulderCenterOffset = 0.45;
constexpr double kHeadOffset = 0.67;
constexpr double kShoulderDrop = 0.04;
constexpr double kShoulderHalfWidth = 0.18;
constexpr double kUpperArm = 0.29;
constexpr double kForearm = 0.26;
constexpr double kHand = 0.09;
constexpr double kHipHalfWidth = 0.10;
constexpr double kHipDrop = 0.06;
constexpr double kThigh = 0.44;
constexpr double kShank = 0.42;
constexpr Vec3 kFootOffset{0.0, -0.05, 0.12};

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 mul(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) { return mul(a, 1.0 / norm(a)); }
Vec3 mirror(const Vec3& a) { return {-a[0], a[1], a[2]}; }

/// Limb directions. Arm directions live in the torso frame (x to the
/// subject's left, y up, z forward) and follow the torso pitch; leg
/// directions are in the world frame.
struct PoseParams {
  double torso_pitch = 0.0;  // forward lean, radians
  Vec3 upper_arm_left{0, -1, 0}, forearm_left{0, -1, 0};
  Vec3 upper_arm_right{0, -1, 0}, forearm_right{0, -1, 0};
  Vec3 thigh_left{0, -1, 0}, shank_left{0, -1, 0};
  Vec3 thigh_right{0, -1, 0}, shank_right{0, -1, 0};

  PoseParams& arms(const Vec3& upper, const Vec3& fore) {
    upper_arm_left = upper;
    forearm_left = fore;
    upper_arm_right = mirror(upper);
    forearm_right = mirror(fore);
    return *this;
  }
  PoseParams& legs(const Vec3& thigh, const Vec3& shank) {
    thigh_left = thigh_right = thigh;
    shank_left = shank_right = shank;
    return *this;
  }
  PoseParams& pitch(double p) {
    torso_pitch = p;
    return *this;
  }
};

/// Builds a pose with the hip center above the origin and the lowest joint on
/// the floor.
Frame build_pose(const PoseParams& p) {
  const double c = std::cos(p.torso_pitch);
  const double s = std::sin(p.torso_pitch);
  auto torso = [&](const Vec3& v) { return Vec3{v[0], v[1] * c - v[2] * s, v[1] * s + v[2] * c}; };

  Frame f;
  const Vec3 hip{0.0, 0.0, 0.0};
  f[JointId::HipCenter] = hip;
  f[JointId::Spine] = torso({0.0, kSpineOffset, 0.0});
  f[JointId::ShoulderCenter] = torso({0.0, kShoulderCenterOffset, 0.0});
  f[JointId::Head] = torso({0.0, kHeadOffset, 0.0});

  auto arm = [&](JointId shoulder, JointId elbow, JointId wrist, JointId hand, double side,
                 const Vec3& upper, const Vec3& fore) {
    f[shoulder] = torso({side * kShoulderHalfWidth, kShoulderCenterOffset - kShoulderDrop, 0.0});
    const Vec3 u = torso(normalized(upper));
    const Vec3 w = torso(normalized(fore));
    f[elbow] = add(f[shoulder], mul(u, kUpperArm));
    f[wrist] = add(f[elbow], mul(w, kForearm));
    f[hand] = add(f[wrist], mul(w, kHand));
  };
  arm(JointId::ShoulderLeft, JointId::ElbowLeft, JointId::WristLeft, JointId::HandLeft, 1.0,
      p.upper_arm_left, p.forearm_left);
  arm(JointId::ShoulderRight, JointId::ElbowRight, JointId::WristRight, JointId::HandRight, -1.0,
      p.upper_arm_right, p.forearm_right);

  auto leg = [&](JointId hip_j, JointId knee, JointId ankle, JointId foot, double side,
                 const Vec3& thigh, const Vec3& shank) {
    f[hip_j] = {side * kHipHalfWidth, -kHipDrop, 0.0};
    f[knee] = add(f[hip_j], mul(normalized(thigh), kThigh));
    f[ankle] = add(f[knee], mul(normalized(shank), kShank));
    f[foot] = add(f[ankle], kFootOffset);
  };
  leg(JointId::HipLeft, JointId::KneeLeft, JointId::AnkleLeft, JointId::FootLeft, 1.0,
      p.thigh_left, p.shank_left);
  leg(JointId::HipRight, JointId::KneeRight, JointId::AnkleRight, JointId::FootRight, -1.0,
      p.thigh_right, p.shank_right);

  double floor = 0.0;
  for (const Vec3& q : f.joints) floor = std::min(floor, q[1]);
  for (Vec3& q : f.joints) q[1] -= floor;
  return f;
}

Frame lerp(const Frame& a, const Frame& b, double w) {
  Frame out;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    for (std::size_t c = 0; c < 3; ++c) {
      out.joints[j][c] = (1.0 - w) * a.joints[j][c] + w * b.joints[j][c];
    }
  }
  return out;
}

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

/// Places the elbow so the upper arm and forearm keep their lengths while the
/// wrist moves from `wrist_old` to `wrist_new`. Bends in the plane of the
/// original arm, or downward when the arm was straight.
Vec3 solve_elbow(const Vec3& shoulder, const Vec3& elbow, const Vec3& wrist_old,
                 const Vec3& wrist_new) {
  const double a = norm(sub(elbow, shoulder));
  const double b = norm(sub(wrist_old, elbow));
  const Vec3 reach = sub(wrist_new, shoulder);
  double d = norm(reach);
  if (d < 1e-12) return elbow;
  const Vec3 u = mul(reach, 1.0 / d);
  d = std::clamp(d, std::abs(a - b) + 1e-9, a + b);
  const double along = (a * a - b * b + d * d) / (2.0 * d);
  const double height = std::sqrt(std::max(a * a - along * along, 0.0));

  auto perpendicular = [&](const Vec3& v) { return sub(v, mul(u, dot(v, u))); };
  Vec3 bend = perpendicular(sub(elbow, shoulder));
  if (norm(bend) < 1e-9 * std::max(a, 1.0)) bend = perpendicular({0.0, -1.0, 0.0});
  if (norm(bend) < 1e-9) bend = perpendicular({0.0, 0.0, -1.0});
  return add(shoulder, add(mul(u, along), mul(normalized(bend), height)));
}

void restrict_arm(Frame& f, JointId shoulder, JointId elbow, JointId wrist, JointId hand,
                  double factor) {
  const Vec3 s = f[shoulder];
  const Vec3 w_old = f[wrist];
  const Vec3 w_new = add(s, mul(sub(w_old, s), factor));
  f[elbow] = solve_elbow(s, f[elbow], w_old, w_new);
  f[hand] = add(f[hand], sub(w_new, w_old));
  f[wrist] = w_new;
}

/// t + m * sum_i c_i sin(i pi t) / (i pi) with sum |c_i| = 1: fixes the
/// endpoints and keeps the derivative at least 1 - m.
struct TimeWarp {
  double magnitude = 0.0;
  std::array<double, 3> coeffs{};

  double operator()(double t) const {
    double offset = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const double k = static_cast<double>(i + 1) * std::numbers::pi;
      offset += coeffs[i] * std::sin(k * t) / k;
    }
    return std::clamp(t + magnitude * offset, 0.0, 1.0);
  }
};

void check_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

}  // namespace

void MotionTemplate::validate() const {
  if (keyframes.size() < 2) throw InvalidArgument("template needs at least two keyframes");
  if (keyframes.front().phase_time != 0.0 || keyframes.back().phase_time != 1.0) {
    throw InvalidArgument("template phase times must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < keyframes.size(); ++i) {
    if (!(keyframes[i].phase_time > keyframes[i - 1].phase_time)) {
      throw InvalidArgument("template phase times must strictly increase");
    }
  }
  for (const auto& k : keyframes) {
    for (const Vec3& p : k.pose.joints) {
      if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
        throw InvalidArgument("template pose has a non-finite coordinate");
      }
    }
  }
}

Frame MotionTemplate::pose_at(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  std::size_t i = 0;
  while (i + 2 < keyframes.size() && t > keyframes[i + 1].phase_time) ++i;
  const double t0 = keyframes[i].phase_time;
  const double t1 = keyframes[i + 1].phase_time;
  const double u = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
  return lerp(keyframes[i].pose, keyframes[i + 1].pose, smoothstep(u));
}

MotionTemplate builtin_template(Exercise exercise) {
  const Vec3 down{0.0, -1.0, 0.0};
  const Vec3 sit_thigh{0.0, -0.05, 1.0};
  MotionTemplate m;
  m.exercise = exercise;
  auto key = [&](double t, const PoseParams& p) { m.keyframes.push_back({t, build_pose(p)}); };

  switch (exercise) {
    case Exercise::BlastOff: {
      // Seated, arms stretched forward.
      key(0.0, PoseParams{}.pitch(0.1).arms({0.05, 0.1, 1.0}, {0.05, 0.1, 1.0}).legs(sit_thigh, down));
      // Seated, leaning in, arms swung back behind the body.
      key(0.5, PoseParams{}
                   .pitch(0.5)
                   .arms({0.4, -0.5, -0.77}, {0.4, -0.5, -0.77})
                   .legs(sit_thigh, down));
      // Standing, arms fully extended overhead.
      key(1.0, PoseParams{}.arms({0.12, 1.0, 0.05}, {0.12, 1.0, 0.05}).legs(down, {0.0, -1.0, 0.02}));
      break;
    }
    case Exercise::BodyBuilder: {
      const PoseParams rest = PoseParams{}.arms({0.15, -1.0, 0.05}, {0.15, -1.0, 0.1});
      key(0.0, rest);
      key(0.35, PoseParams{}.arms({1.0, 0.05, 0.0}, {1.0, 0.05, 0.0}));
      key(0.7, PoseParams{}.arms({1.0, 0.1, 0.0}, {0.1, 1.0, 0.05}));
      key(1.0, rest);
      break;
    }
    case Exercise::FinishLine: {
      const PoseParams stand = PoseParams{}.arms({0.15, -1.0, 0.05}, {0.15, -1.0, 0.1});
      PoseParams lunge = PoseParams{}.pitch(0.15).arms({0.5, 0.85, 0.05}, {0.5, 0.85, 0.05});
      lunge.thigh_left = {0.0, -0.5, 0.85};
      lunge.shank_left = {0.0, -1.0, 0.05};
      lunge.thigh_right = {0.0, -0.9, -0.4};
      lunge.shank_right = {0.0, -0.6, -0.8};
      key(0.0, stand);
      key(0.5, lunge);
      key(1.0, stand);
      break;
    }
    case Exercise::ReachForTheStars: {
      const PoseParams squat =
          PoseParams{}.pitch(0.35).arms({0.1, -0.7, 0.7}, {0.1, -0.6, 0.8}).legs({0.0, -0.45, 0.9},
                                                                                 {0.0, -0.95, -0.3});
      key(0.0, squat);
      key(0.5, PoseParams{}.arms({0.2, 1.0, 0.1}, {0.2, 1.0, 0.1}));
      key(1.0, squat);
      break;
    }
    case Exercise::TakeABow: {
      const PoseParams stand = PoseParams{}.arms({0.15, -1.0, 0.05}, {0.15, -1.0, 0.1});
      PoseParams bow = PoseParams{}.pitch(1.0);
      bow.upper_arm_left = {0.2, -0.8, -0.55};
      bow.forearm_left = {0.2, -0.7, -0.65};
      bow.upper_arm_right = {0.3, -0.9, 0.3};
      bow.forearm_right = {0.6, -0.3, 0.7};
      key(0.0, stand);
      key(0.5, bow);
      key(1.0, stand);
      break;
    }
  }
  m.validate();
  return m;
}

SkeletonSample generate_sample(const MotionTemplate& motion, const SubjectProfile& profile,
                               std::span<const ErrorSpec> errors, std::size_t n_frames) {
  motion.validate();
  if (n_frames < 2) throw InvalidArgument("n_frames must be at least 2");
  if (!(profile.height_scale > 0.0)) throw InvalidArgument("height_scale must be positive");
  if (!(profile.noise_sd >= 0.0)) throw InvalidArgument("noise_sd must be nonnegative");

  MotionTemplate shaped = motion;
  TimeWarp warp;
  std::vector<std::pair<Limb, double>> restrictions;
  Rng warp_rng(derive_seed(profile.seed, {1}));

  for (const ErrorSpec& spec : errors) {
    if (const auto* r = std::get_if<RestrictedExtension>(&spec)) {
      check_unit_open(r->factor, "restricted extension factor");
      restrictions.emplace_back(r->limb, r->factor);
    } else if (const auto* p = std::get_if<IncompletePhase>(&spec)) {
      check_unit_open(p->completion, "phase completion");
      if (p->phase_index == 0 || p->phase_index >= shaped.keyframes.size()) {
        throw InvalidArgument("phase_index must name a keyframe after the first");
      }
      auto& target = shaped.keyframes[p->phase_index].pose;
      target = lerp(shaped.keyframes[p->phase_index - 1].pose, target, p->completion);
    } else {
      const auto& j = std::get<TempoJitter>(spec);
      if (!(j.magnitude >= 0.0 && j.magnitude < 1.0)) {
        throw InvalidArgument("tempo jitter magnitude must lie in [0, 1)");
      }
      double total = 0.0;
      for (double& c : warp.coeffs) {
        c = warp_rng.uniform(-1.0, 1.0);
        total += std::abs(c);
      }
      for (double& c : warp.coeffs) c /= total;
      warp.magnitude = j.magnitude;
    }
  }

  SkeletonSample sample;
  sample.subject_id = profile.subject_id;
  sample.exercise = motion.exercise;
  sample.label = errors.empty() ? Label::Good : Label::Bad;
  sample.frames.reserve(n_frames);

  Rng noise(derive_seed(profile.seed, {2}));
  for (std::size_t k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n_frames - 1);
    Frame f = shaped.pose_at(warp.magnitude > 0.0 ? warp(t) : t);
    for (const auto& [limb, factor] : restrictions) {
      if (limb != Limb::ArmRight) {
        restrict_arm(f, JointId::ShoulderLeft, JointId::ElbowLeft, JointId::WristLeft,
                     JointId::HandLeft, factor);
      }
      if (limb != Limb::ArmLeft) {
        restrict_arm(f, JointId::ShoulderRight, JointId::ElbowRight, JointId::WristRight,
                     JointId::HandRight, factor);
      }
    }
    for (Vec3& p : f.joints) {
      for (std::size_t c = 0; c < 3; ++c) {
        p[c] *= profile.height_scale;
        if (profile.noise_sd > 0.0) p[c] += profile.noise_sd * noise.normal();
        p[c] += profile.camera_offset[c];
      }
    }
    sample.frames.push_back(f);
  }
  return sample;
}

ErrorSpec draw_error(const MotionTemplate& motion, std::uint64_t seed, const GeneratorRanges& ranges) {
  Rng rng(seed);
  switch (rng.index(3)) {
    case 0: {
      constexpr Limb limbs[] = {Limb::ArmLeft, Limb::ArmRight, Limb::Both};
      const Limb limb = limbs[rng.index(3)];
      return RestrictedExtension{limb, rng.uniform(ranges.factor_lo, ranges.factor_hi)};
    }
    case 1: {
      const std::size_t phase = 1 + rng.index(motion.keyframes.size() - 1);
      return IncompletePhase{phase, rng.uniform(ranges.completion_lo, ranges.completion_hi)};
    }
    default:
      return TempoJitter{rng.uniform(ranges.jitter_lo, ranges.jitter_hi)};
  }
}

SubjectProfile draw_profile(int subject_id, std::uint64_t seed, const GeneratorRanges& ranges) {
  Rng rng(seed);
  SubjectProfile p;
  p.subject_id = subject_id;
  p.height_scale = rng.uniform(ranges.height_lo, ranges.height_hi);
  // Kinect-like placement: camera ~1 m above the floor, subject 2-3 m away.
  p.camera_offset = {rng.uniform(-0.4, 0.4), rng.uniform(-0.9, -0.6), rng.uniform(2.0, 3.0)};
  p.noise_sd = rng.uniform(ranges.noise_lo, ranges.noise_hi);
  p.seed = seed;
  return p;
}

std::vector<GeneratedSample> generate_samples(const MotionTemplate& motion,
                                              std::span<const std::size_t> pos_per_subject,
                                              std::span<const std::size_t> neg_per_subject,
                                              std::uint64_t base_seed,
                                              const GeneratorRanges& ranges) {
  if (pos_per_subject.empty() || pos_per_subject.size() != neg_per_subject.size()) {
    throw InvalidArgument("need one good and one bad count per subject");
  }
  for (std::size_t s = 0; s < pos_per_subject.size(); ++s) {
    if (pos_per_subject[s] == 0 || neg_per_subject[s] == 0) {
      throw InvalidArgument("sample counts must be at least 1");
    }
  }
  if (ranges.frames_lo < 2 || ranges.frames_hi < ranges.frames_lo) {
    throw InvalidArgument("invalid frame count range");
  }
  motion.validate();

  std::vector<GeneratedSample> out;
  for (std::size_t s = 0; s < pos_per_subject.size(); ++s) {
    const int subject_id = static_cast<int>(s + 1);
    const SubjectProfile profile =
        draw_profile(subject_id, derive_seed(base_seed, {0, s + 1}), ranges);
    const std::size_t total = neg_per_subject[s] + pos_per_subject[s];
    for (std::size_t k = 0; k < total; ++k) {
      const std::uint64_t sample_seed = derive_seed(base_seed, {1, s + 1, k});
      SubjectProfile sample_profile = profile;
      sample_profile.seed = sample_seed;
      Rng frame_rng(derive_seed(sample_seed, {3}));
      const std::size_t n_frames =
          ranges.frames_lo + frame_rng.index(ranges.frames_hi - ranges.frames_lo + 1);

      GeneratedSample g;
      if (k < neg_per_subject[s]) {
        g.errors.push_back(draw_error(motion, derive_seed(sample_seed, {4}), ranges));
      }
      g.sample = generate_sample(motion, sample_profile, g.errors, n_frames);
      out.push_back(std::move(g));
    }
  }
  return out;
}

Dataset generate_dataset(const MotionTemplate& motion, std::span<const std::size_t> pos_per_subject,
                         std::span<const std::size_t> neg_per_subject, std::uint64_t base_seed,
                         const GeneratorRanges& ranges) {
  Dataset dataset;
  dataset.provenance = "synthetic:" + std::string(exercise_name(motion.exercise)) +
                       ":seed=" + std::to_string(base_seed);
  for (auto& g : generate_samples(motion, pos_per_subject, neg_per_subject, base_seed, ranges)) {
    dataset.samples.push_back(std::move(g.sample));
  }
  return dataset;
}

}  // namespace lamq
