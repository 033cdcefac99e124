#include "lamq/skeleton.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace lamq {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "HipCenter",  "Spine",      "ShoulderCenter", "Head",       "ShoulderLeft",
    "ElbowLeft",  "WristLeft",  "HandLeft",       "ShoulderRight", "ElbowRight",
    "WristRight", "HandRight",  "HipLeft",        "KneeLeft",   "AnkleLeft",
    "FootLeft",   "HipRight",   "KneeRight",      "AnkleRight", "FootRight"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view joint_name(JointId j) noexcept { return kJointNames[index(j)]; }

std::string_view label_name(Label l) noexcept { return l == Label::Good ? "good" : "bad"; }

std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "good") return Label::Good;
  if (text == "bad") return Label::Bad;
  return std::nullopt;
}

std::string_view exercise_name(Exercise e) noexcept {
  switch (e) {
    case Exercise::BlastOff: return "Blast-Off";
    case Exercise::BodyBuilder: return "Body-Builder";
    case Exercise::FinishLine: return "Finish-Line";
    case Exercise::ReachForTheStars: return "Reach-For-The-Stars";
    case Exercise::TakeABow: return "Take-A-Bow";
  }
  return "";
}

std::optional<Exercise> parse_exercise(std::string_view text) noexcept {
  for (Exercise e : kAllExercises) {
    if (iequals(text, exercise_name(e))) return e;
  }
  return std::nullopt;
}

ValidationResult validate_sample(const SkeletonSample& sample) {
  ValidationResult result;
  if (sample.label != Label::Good && sample.label != Label::Bad) {
    result.violations.emplace_back("label is neither good nor bad");
  }
  if (sample.frames.empty()) {
    result.violations.emplace_back("empty frame list");
    return result;
  }
  if (sample.frames.size() < 2) {
    result.violations.emplace_back("fewer than 2 frames");
  }
  for (std::size_t i = 0; i < sample.frames.size(); ++i) {
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const Vec3& p = sample.frames[i].joints[j];
      if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
        result.violations.push_back("non-finite coordinate at frame " + std::to_string(i) +
                                    ", joint " + std::to_string(j));
      }
    }
  }
  return result;
}

}  // namespace lamq
