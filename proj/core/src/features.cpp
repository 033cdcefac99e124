#include "lamq/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lamq/error.hpp"

namespace lamq {

namespace {

constexpr std::array<AngleTriple, kAngleCount> kAngleTriples = {{
    {JointId::HipLeft, JointId::KneeLeft, JointId::AnkleLeft},
    {JointId::HipRight, JointId::KneeRight, JointId::AnkleRight},
    {JointId::ShoulderLeft, JointId::ElbowLeft, JointId::WristLeft},
    {JointId::ShoulderRight, JointId::ElbowRight, JointId::WristRight},
    {JointId::KneeLeft, JointId::HipLeft, JointId::Spine},
    {JointId::KneeRight, JointId::HipRight, JointId::Spine},
    {JointId::ElbowLeft, JointId::ShoulderLeft, JointId::HipCenter},
    {JointId::ElbowRight, JointId::ShoulderRight, JointId::HipCenter},
    {JointId::ElbowLeft, JointId::ShoulderLeft, JointId::ShoulderRight},
    {JointId::ElbowRight, JointId::ShoulderRight, JointId::ShoulderLeft},
}};

constexpr std::array<std::string_view, kAngleCount> kAngleNames = {
    "KneeLeft",
    "KneeRight",
    "ElbowLeft",
    "ElbowRight",
    "FemurSpineLeft",
    "FemurSpineRight",
    "ElbowShoulderHipLeft",
    "ElbowShoulderHipRight",
    "ElbowShoulderShoulderLeft",
    "ElbowShoulderShoulderRight",
};

void require_frames(const SkeletonSample& sample, std::size_t frames) {
  if (sample.frames.size() != frames) {
    throw InvalidArgument("expected " + std::to_string(frames) + " frames, got " +
                          std::to_string(sample.frames.size()));
  }
}

}  // namespace

std::string_view representation_name(Representation rep) noexcept {
  switch (rep) {
    case Representation::JointTime: return "joint-time";
    case Representation::AngleTime: return "angle-time";
    case Representation::JointFreq: return "joint-freq";
    case Representation::AngleFreq: return "angle-freq";
  }
  return "";
}

std::optional<Representation> parse_representation(std::string_view text) noexcept {
  for (Representation rep : kAllRepresentations) {
    if (text == representation_name(rep)) return rep;
  }
  return std::nullopt;
}

AngleTriple angle_triple(AngleId id) noexcept { return kAngleTriples[static_cast<std::size_t>(id)]; }

std::string_view angle_name(AngleId id) noexcept { return kAngleNames[static_cast<std::size_t>(id)]; }

double angle_between(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  const Vec3 v{c[0] - b[0], c[1] - b[1], c[2] - b[2]};
  const double nu = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  const double nv = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(nu > kDegenerateRay) || !(nv > kDegenerateRay)) {
    throw InvalidArgument("degenerate ray in angle computation");
  }
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::acos(std::clamp(dot / (nu * nv), -1.0, 1.0));
}

FeatureVector flatten_joints(const SkeletonSample& sample, std::size_t frames) {
  require_frames(sample, frames);
  FeatureVector fv;
  fv.rep = Representation::JointTime;
  fv.values.reserve(feature_dimension(fv.rep, frames));
  for (const Frame& frame : sample.frames) {
    for (const Vec3& p : frame.joints) {
      fv.values.insert(fv.values.end(), p.begin(), p.end());
    }
  }
  return fv;
}

FeatureVector compute_angles(const SkeletonSample& sample, std::size_t frames) {
  require_frames(sample, frames);
  FeatureVector fv;
  fv.rep = Representation::AngleTime;
  fv.values.reserve(feature_dimension(fv.rep, frames));
  for (std::size_t k = 0; k < frames; ++k) {
    const Frame& frame = sample.frames[k];
    for (std::size_t i = 0; i < kAngleCount; ++i) {
      const AngleTriple& t = kAngleTriples[i];
      try {
        fv.values.push_back(angle_between(frame[t.a], frame[t.vertex], frame[t.c]));
      } catch (const InvalidArgument&) {
        throw InvalidArgument("degenerate ray for angle " + std::string(kAngleNames[i]) + " (" +
                              std::string(joint_name(t.a)) + ", " +
                              std::string(joint_name(t.vertex)) + ", " +
                              std::string(joint_name(t.c)) + ") at frame " + std::to_string(k));
      }
    }
  }
  return fv;
}

namespace {

// basis[m * n + k] = c(m) cos(pi (2k + 1) m / (2n))
std::vector<double> dct_basis(std::size_t n) {
  std::vector<double> basis(n * n);
  const double c0 = std::sqrt(1.0 / static_cast<double>(n));
  const double c1 = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t m = 0; m < n; ++m) {
    const double cm = m == 0 ? c0 : c1;
    for (std::size_t k = 0; k < n; ++k) {
      basis[m * n + k] = cm * std::cos(std::numbers::pi * static_cast<double>((2 * k + 1) * m) /
                                       (2.0 * static_cast<double>(n)));
    }
  }
  return basis;
}

}  // namespace

std::vector<double> dct_ii(std::span<const double> signal) {
  const std::size_t n = signal.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const auto basis = dct_basis(n);
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += basis[m * n + k] * signal[k];
    out[m] = acc;
  }
  return out;
}

FeatureVector dct_transform(const FeatureVector& time_features) {
  if (is_frequency(time_features.rep)) {
    throw InvalidArgument("dct_transform expects a time-domain representation");
  }
  const std::size_t channels = channel_count(time_features.rep);
  if (time_features.values.size() % channels != 0) {
    throw InvalidArgument("feature length is not a multiple of the channel count");
  }
  const std::size_t n = time_features.values.size() / channels;
  FeatureVector out;
  out.rep = frequency_domain_of(time_features.rep);
  out.source = time_features.source;
  out.values.assign(time_features.values.size(), 0.0);
  if (n == 0) return out;

  const auto basis = dct_basis(n);
  std::vector<double> channel(n);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t k = 0; k < n; ++k) channel[k] = time_features.values[k * channels + c];
    for (std::size_t m = 0; m < n; ++m) {
      double acc = 0.0;
      const double* row = basis.data() + m * n;
      for (std::size_t k = 0; k < n; ++k) acc += row[k] * channel[k];
      out.values[c * n + m] = acc;
    }
  }
  return out;
}

FeatureVector extract_features(const SkeletonSample& sample, Representation rep,
                               std::size_t frames) {
  const Representation base = time_domain_of(rep);
  FeatureVector fv = base == Representation::JointTime ? flatten_joints(sample, frames)
                                                       : compute_angles(sample, frames);
  if (is_frequency(rep)) fv = dct_transform(fv);
  if (fv.values.size() != feature_dimension(rep, frames)) {
    throw Error("feature dimension mismatch for " + std::string(representation_name(rep)));
  }
  return fv;
}

FeatureMatrix FeatureMatrix::from_vectors(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) return {};
  const std::size_t cols = vectors.front().values.size();
  FeatureMatrix m(vectors.size(), cols);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].values.size() != cols) {
      throw InvalidArgument("feature vectors differ in length: " + std::to_string(cols) + " vs " +
                            std::to_string(vectors[i].values.size()));
    }
    std::copy(vectors[i].values.begin(), vectors[i].values.end(), m.row(i).begin());
  }
  return m;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  FeatureMatrix m(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), m.row(i).begin());
  }
  return m;
}

}  // namespace lamq
