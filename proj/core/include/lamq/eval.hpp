#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lamq/classifiers/model.hpp"
#include "lamq/features.hpp"
#include "lamq/skeleton.hpp"

namespace lamq {

/// Train on some subjects, test on the rest ("3 vs 2").
struct SubjectHoldout {
  std::set<int> train_subjects;
  std::set<int> test_subjects;
};

/// Seeded uniform draw of n_train samples without replacement.
struct RandomSplit {
  std::size_t n_train = 80;
  std::uint64_t seed = 0;
};

using SplitSpec = std::variant<SubjectHoldout, RandomSplit>;

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Throws InvalidArgument for invalid specs (overlapping or empty subject
/// sets, unknown subjects, n_train >= sample count).
SplitIndices split_indices(const Dataset& dataset, const SplitSpec& spec);
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

/// tpr / fpr are absent when their denominator is zero.
struct Metrics {
  double accuracy = 0.0;
  std::optional<double> tpr;
  std::optional<double> fpr;
  Confusion confusion;
};

Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> labels);

struct ScoredLabel {
  double score = 0.0;
  Label label = Label::Bad;
};

struct RunResult {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  Metrics metrics;
  std::vector<ScoredLabel> scores;
};

struct Aggregate {
  double mean_accuracy = 0.0;
  /// Means over the runs where the rate is defined; absent if none are.
  std::optional<double> mean_tpr;
  std::optional<double> mean_fpr;
};

Aggregate aggregate_runs(std::span<const RunResult> runs);

enum class ProtocolKind { SubjectHoldout, RandomSplit };

struct Protocol {
  ProtocolKind kind = ProtocolKind::RandomSplit;
  SubjectHoldout holdout;  // used for SubjectHoldout
  std::size_t n_train = 80;  // used for RandomSplit

  /// "holdout:1,2,3/4,5" or "random:80".
  static Protocol parse(std::string_view text);
  std::string to_string() const;
};

struct EvalReport {
  Representation rep = Representation::JointTime;
  std::string classifier;
  Protocol protocol;
  std::uint64_t base_seed = 0;
  std::vector<RunResult> runs;
  Aggregate aggregate;
};

/// Runs the protocol n_runs times. Run i uses seed base_seed + i for both the
/// split and the model. Subject holdout requires n_runs == 1. The dataset
/// must be preprocessed to `frames` frames. Runs may execute concurrently;
/// results are ordered by run index regardless of scheduling.
EvalReport run_protocol(const Dataset& dataset, Representation rep, const ClassifierSpec& spec,
                        const Protocol& protocol, std::size_t n_runs, std::uint64_t base_seed,
                        std::size_t frames = 160, std::size_t threads = 1);

/// Same, over features that were already extracted (rows aligned with labels
/// and subject ids).
EvalReport run_protocol(const FeatureMatrix& features, std::span<const Label> labels,
                        std::span<const int> subjects, Representation rep,
                        const ClassifierSpec& spec, const Protocol& protocol, std::size_t n_runs,
                        std::uint64_t base_seed, std::size_t threads = 1);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  /// Samples with score >= threshold are called Good; +inf for the origin.
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
};

/// Index of the median run after a stable sort by accuracy ascending,
/// taking the lower median for even counts.
std::size_t median_run_index(std::span<const RunResult> runs);

/// ROC of one run's scores: the origin at threshold +inf, then one point per
/// distinct score in descending order, ending at (1, 1).
/// Throws InvalidArgument if either class is missing.
RocCurve roc_from_scores(std::span<const ScoredLabel> scores);

/// ROC of the median-accuracy run.
RocCurve roc_curve(std::span<const RunResult> runs);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);
/// "threshold,fpr,tpr" rows.
std::string roc_to_csv(const RocCurve& curve);

}  // namespace lamq
