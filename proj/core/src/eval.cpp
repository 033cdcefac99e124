#include "lamq/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lamq/error.hpp"
#include "lamq/io_util.hpp"
#include "lamq/parallel.hpp"
#include "lamq/rng.hpp"

namespace lamq {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join_subjects(const std::set<int>& subjects) {
  std::string out;
  for (int s : subjects) {
    if (!out.empty()) out += ',';
    out += std::to_string(s);
  }
  return out;
}

SplitIndices split_subjects(std::span<const int> subjects, const SplitSpec& spec) {
  const std::size_t n = subjects.size();
  SplitIndices out;
  if (const auto* holdout = std::get_if<SubjectHoldout>(&spec)) {
    if (holdout->train_subjects.empty() || holdout->test_subjects.empty()) {
      throw InvalidArgument("holdout needs nonempty train and test subject sets");
    }
    for (int s : holdout->train_subjects) {
      if (holdout->test_subjects.count(s)) {
        throw InvalidArgument("subject " + std::to_string(s) + " is in both train and test sets");
      }
    }
    const std::set<int> present(subjects.begin(), subjects.end());
    for (const auto* set : {&holdout->train_subjects, &holdout->test_subjects}) {
      for (int s : *set) {
        if (!present.count(s)) throw InvalidArgument("unknown subject id " + std::to_string(s));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (holdout->train_subjects.count(subjects[i])) {
        out.train.push_back(i);
      } else if (holdout->test_subjects.count(subjects[i])) {
        out.test.push_back(i);
      } else {
        throw InvalidArgument("subject " + std::to_string(subjects[i]) +
                              " is assigned to neither train nor test");
      }
    }
    return out;
  }

  const auto& random = std::get<RandomSplit>(spec);
  if (random.n_train == 0 || random.n_train >= n) {
    throw InvalidArgument("n_train must lie in [1, " + std::to_string(n) + "), got " +
                          std::to_string(random.n_train));
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(random.seed);
  for (std::size_t i = 0; i < random.n_train; ++i) {
    std::swap(idx[i], idx[i + rng.index(n - i)]);
  }
  out.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(random.n_train));
  out.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(random.n_train), idx.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<int> subjects_of(const Dataset& dataset) {
  std::vector<int> subjects;
  subjects.reserve(dataset.samples.size());
  for (const auto& s : dataset.samples) subjects.push_back(s.subject_id);
  return subjects;
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

SplitIndices split_indices(const Dataset& dataset, const SplitSpec& spec) {
  return split_subjects(subjects_of(dataset), spec);
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
  const SplitIndices idx = split_indices(dataset, spec);
  Dataset train, test;
  train.provenance = test.provenance = dataset.provenance;
  train.preprocessed = test.preprocessed = dataset.preprocessed;
  for (std::size_t i : idx.train) train.samples.push_back(dataset.samples[i]);
  for (std::size_t i : idx.test) test.samples.push_back(dataset.samples[i]);
  return {std::move(train), std::move(test)};
}

Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size()) {
    throw InvalidArgument("predictions and labels differ in length: " +
                          std::to_string(predictions.size()) + " vs " + std::to_string(labels.size()));
  }
  if (labels.empty()) throw InvalidArgument("compute_metrics needs at least one sample");
  Metrics m;
  Confusion& c = m.confusion;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted_good = predictions[i] == Label::Good;
    if (labels[i] == Label::Good) {
      ++(predicted_good ? c.tp : c.fn);
    } else {
      ++(predicted_good ? c.fp : c.tn);
    }
  }
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fn > 0) m.tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.fp + c.tn > 0) m.fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
  return m;
}

Aggregate aggregate_runs(std::span<const RunResult> runs) {
  Aggregate agg;
  if (runs.empty()) return agg;
  double acc = 0.0, tpr = 0.0, fpr = 0.0;
  std::size_t n_tpr = 0, n_fpr = 0;
  for (const RunResult& r : runs) {
    acc += r.metrics.accuracy;
    if (r.metrics.tpr) {
      tpr += *r.metrics.tpr;
      ++n_tpr;
    }
    if (r.metrics.fpr) {
      fpr += *r.metrics.fpr;
      ++n_fpr;
    }
  }
  agg.mean_accuracy = acc / static_cast<double>(runs.size());
  if (n_tpr) agg.mean_tpr = tpr / static_cast<double>(n_tpr);
  if (n_fpr) agg.mean_fpr = fpr / static_cast<double>(n_fpr);
  return agg;
}

Protocol Protocol::parse(std::string_view text) {
  auto parse_set = [&](std::string_view list) {
    std::set<int> out;
    std::size_t start = 0;
    while (start <= list.size()) {
      std::size_t comma = list.find(',', start);
      std::string_view item = list.substr(start, comma == std::string_view::npos ? list.npos : comma - start);
      int v = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        throw InvalidArgument("bad subject list '" + std::string(list) + "'");
      }
      out.insert(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  };

  Protocol p;
  if (text.rfind("holdout:", 0) == 0) {
    std::string_view rest = text.substr(8);
    std::size_t slash = rest.find('/');
    if (slash == std::string_view::npos) {
      throw InvalidArgument("holdout protocol must look like holdout:1,2,3/4,5");
    }
    p.kind = ProtocolKind::SubjectHoldout;
    p.holdout.train_subjects = parse_set(rest.substr(0, slash));
    p.holdout.test_subjects = parse_set(rest.substr(slash + 1));
    return p;
  }
  if (text.rfind("random:", 0) == 0) {
    std::string_view rest = text.substr(7);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (rest.empty() || ec != std::errc() || ptr != rest.data() + rest.size() || n == 0) {
      throw InvalidArgument("random protocol must look like random:80");
    }
    p.kind = ProtocolKind::RandomSplit;
    p.n_train = n;
    return p;
  }
  throw InvalidArgument("unknown protocol '" + std::string(text) + "'");
}

std::string Protocol::to_string() const {
  if (kind == ProtocolKind::SubjectHoldout) {
    return "holdout:" + join_subjects(holdout.train_subjects) + "/" +
           join_subjects(holdout.test_subjects);
  }
  return "random:" + std::to_string(n_train);
}

EvalReport run_protocol(const FeatureMatrix& features, std::span<const Label> labels,
                        std::span<const int> subjects, Representation rep,
                        const ClassifierSpec& spec, const Protocol& protocol, std::size_t n_runs,
                        std::uint64_t base_seed, std::size_t threads) {
  if (n_runs == 0) throw InvalidArgument("n_runs must be positive");
  if (protocol.kind == ProtocolKind::SubjectHoldout && n_runs != 1) {
    throw InvalidArgument("subject holdout is deterministic; it requires exactly 1 run");
  }
  if (features.rows() != labels.size() || labels.size() != subjects.size()) {
    throw InvalidArgument("features, labels and subjects must have the same length");
  }
  const std::size_t expected = feature_dimension(rep, features.cols() / channel_count(rep));
  if (features.cols() == 0 || expected != features.cols()) {
    throw InvalidArgument("feature dimension " + std::to_string(features.cols()) +
                          " does not fit representation " + std::string(representation_name(rep)));
  }

  EvalReport report;
  report.rep = rep;
  report.classifier = spec.name();
  report.protocol = protocol;
  report.base_seed = base_seed;
  report.runs.resize(n_runs);

  parallel_for(n_runs, threads, [&](std::size_t r) {
    const std::uint64_t seed = base_seed + r;
    SplitSpec split_spec = protocol.kind == ProtocolKind::SubjectHoldout
                               ? SplitSpec{protocol.holdout}
                               : SplitSpec{RandomSplit{protocol.n_train, seed}};
    const SplitIndices idx = split_subjects(subjects, split_spec);

    std::vector<Label> train_labels, test_labels;
    for (std::size_t i : idx.train) train_labels.push_back(labels[i]);
    for (std::size_t i : idx.test) test_labels.push_back(labels[i]);
    const TrainedModel model =
        train_model(spec, rep, features.select_rows(idx.train), train_labels, seed);

    RunResult& result = report.runs[r];
    result.run_index = r;
    result.seed = seed;
    std::vector<Label> predictions;
    for (std::size_t k = 0; k < idx.test.size(); ++k) {
      const Prediction p = predict(model, features.row(idx.test[k]));
      predictions.push_back(p.label);
      result.scores.push_back({p.score, test_labels[k]});
    }
    result.metrics = compute_metrics(predictions, test_labels);
  });

  report.aggregate = aggregate_runs(report.runs);
  return report;
}

EvalReport run_protocol(const Dataset& dataset, Representation rep, const ClassifierSpec& spec,
                        const Protocol& protocol, std::size_t n_runs, std::uint64_t base_seed,
                        std::size_t frames, std::size_t threads) {
  if (!dataset.preprocessed) throw InvalidArgument("run_protocol needs a preprocessed dataset");
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  vectors.reserve(dataset.samples.size());
  for (const auto& s : dataset.samples) {
    vectors.push_back(extract_features(s, rep, frames));
    labels.push_back(s.label);
  }
  const auto subjects = subjects_of(dataset);
  return run_protocol(FeatureMatrix::from_vectors(vectors), labels, subjects, rep, spec, protocol,
                      n_runs, base_seed, threads);
}

std::size_t median_run_index(std::span<const RunResult> runs) {
  if (runs.empty()) throw InvalidArgument("no runs");
  std::vector<std::size_t> order(runs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return runs[a].metrics.accuracy < runs[b].metrics.accuracy;
  });
  return order[(runs.size() - 1) / 2];
}

RocCurve roc_from_scores(std::span<const ScoredLabel> scores) {
  std::size_t positives = 0, negatives = 0;
  for (const auto& s : scores) (s.label == Label::Good ? positives : negatives) += 1;
  if (positives == 0 || negatives == 0) {
    throw InvalidArgument("ROC needs both classes in the test set");
  }
  std::vector<ScoredLabel> sorted(scores.begin(), scores.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    (sorted[i].label == Label::Good ? tp : fp) += 1;
    if (i + 1 < sorted.size() && sorted[i + 1].score == sorted[i].score) continue;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives),
                            sorted[i].score});
  }
  return curve;
}

RocCurve roc_curve(std::span<const RunResult> runs) {
  return roc_from_scores(runs[median_run_index(runs)].scores);
}

std::string report_to_json(const EvalReport& report) {
  ordered_json doc;
  doc["format"] = "lamq-eval-report";
  doc["version"] = 1;
  doc["representation"] = representation_name(report.rep);
  doc["classifier"] = report.classifier;
  doc["protocol"] = report.protocol.to_string();
  doc["base_seed"] = report.base_seed;
  ordered_json runs = ordered_json::array();
  for (const RunResult& r : report.runs) {
    ordered_json scores = ordered_json::array();
    for (const auto& s : r.scores) scores.push_back({s.score, label_name(s.label)});
    const Confusion& c = r.metrics.confusion;
    runs.push_back({{"run_index", r.run_index},
                    {"seed", r.seed},
                    {"accuracy", r.metrics.accuracy},
                    {"tpr", optional_json(r.metrics.tpr)},
                    {"fpr", optional_json(r.metrics.fpr)},
                    {"confusion", {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}}},
                    {"scores", scores}});
  }
  doc["runs"] = runs;
  doc["aggregate"] = {{"mean_accuracy", report.aggregate.mean_accuracy},
                      {"mean_tpr", optional_json(report.aggregate.mean_tpr)},
                      {"mean_fpr", optional_json(report.aggregate.mean_fpr)}};
  return doc.dump(1) + "\n";
}

EvalReport report_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "lamq-eval-report") throw Error("not a lamq evaluation report");
    EvalReport report;
    auto rep = parse_representation(doc.at("representation").get<std::string>());
    if (!rep) throw Error("report: unknown representation");
    report.rep = *rep;
    report.classifier = doc.at("classifier").get<std::string>();
    report.protocol = Protocol::parse(doc.at("protocol").get<std::string>());
    report.base_seed = doc.at("base_seed").get<std::uint64_t>();
    for (const auto& r : doc.at("runs")) {
      RunResult run;
      run.run_index = r.at("run_index").get<std::size_t>();
      run.seed = r.at("seed").get<std::uint64_t>();
      run.metrics.accuracy = r.at("accuracy").get<double>();
      run.metrics.tpr = optional_from(r.at("tpr"));
      run.metrics.fpr = optional_from(r.at("fpr"));
      const auto& c = r.at("confusion");
      run.metrics.confusion = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                               c.at("tn").get<std::size_t>(), c.at("fn").get<std::size_t>()};
      for (const auto& s : r.at("scores")) {
        auto label = parse_label(s.at(1).get<std::string>());
        if (!label) throw Error("report: bad label");
        run.scores.push_back({s.at(0).get<double>(), *label});
      }
      report.runs.push_back(std::move(run));
    }
    const auto& agg = doc.at("aggregate");
    report.aggregate.mean_accuracy = agg.at("mean_accuracy").get<double>();
    report.aggregate.mean_tpr = optional_from(agg.at("mean_tpr"));
    report.aggregate.mean_fpr = optional_from(agg.at("mean_fpr"));
    return report;
  } catch (const json::exception& e) {
    throw Error(std::string("report JSON: ") + e.what());
  }
}

std::string roc_to_csv(const RocCurve& curve) {
  std::string out = "threshold,fpr,tpr\n";
  for (const RocPoint& p : curve.points) {
    if (std::isinf(p.threshold)) {
      out += p.threshold > 0 ? "inf" : "-inf";
    } else {
      append_double(out, p.threshold);
    }
    out += ',';
    append_double(out, p.fpr);
    out += ',';
    append_double(out, p.tpr);
    out += '\n';
  }
  return out;
}

}  // namespace lamq
