#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "lamq/classifiers/adaboost.hpp"
#include "lamq/classifiers/dtw.hpp"
#include "lamq/classifiers/nn.hpp"
#include "lamq/classifiers/svdd.hpp"
#include "lamq/classifiers/svm.hpp"
#include "lamq/features.hpp"

namespace lamq {

enum class Family { Svm, Svdd, AdaBoost, Dtw, Nn };

std::string_view family_name(Family f) noexcept;

/// A family plus its training configuration. Names accepted by `from_name`:
/// svm, svdd, adaboost, dtw, nn (one hidden layer) and mnn (two).
struct ClassifierSpec {
  Family family = Family::Svm;
  SvmConfig svm;
  SvddConfig svdd;
  AdaBoostConfig adaboost;
  NnConfig nn;

  static std::optional<ClassifierSpec> from_name(std::string_view name);
  /// Inverse of from_name.
  std::string name() const;
};

struct TrainedModel {
  Representation rep = Representation::JointTime;
  std::variant<LinearSvmModel, SvddModel, AdaBoostModel, DtwModel, NnModel> params;

  Family family() const noexcept { return static_cast<Family>(params.index()); }
  /// Expected feature vector length.
  std::size_t input_dim() const noexcept;
};

struct Prediction {
  Label label = Label::Bad;
  double score = 0.0;
};

/// Good iff score > 0; a score of exactly zero is Bad.
/// Throws InvalidArgument on a dimension mismatch.
Prediction predict(const TrainedModel& model, std::span<const double> x);

/// Trains the requested family. `seed` overrides the seed in the family
/// config. svdd and dtw see only the Good rows. DTW rejects frequency
/// representations.
TrainedModel train_model(const ClassifierSpec& spec, Representation rep, const FeatureMatrix& x,
                         std::span<const Label> y, std::uint64_t seed);

/// Versioned JSON document carrying family, representation, parameters and
/// training config.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);

}  // namespace lamq
