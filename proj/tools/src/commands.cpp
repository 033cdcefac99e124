#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamq/classifiers/model.hpp"
#include "lamq/dataset_io.hpp"
#include "lamq/error.hpp"
#include "lamq/eval.hpp"
#include "lamq/io_util.hpp"
#include "lamq/parallel.hpp"
#include "lamq/preprocess.hpp"
#include "lamq/syndata.hpp"
#include "lamq_cli/cli.hpp"
#include "lamq_cli/feature_file.hpp"

namespace lamq::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 42;
  bool quiet = false;
  std::string format;  // empty, "json" or "csv"
};

struct GenerateArgs {
  std::string exercise = "blast-off";
  std::size_t subjects = 5;
  std::vector<std::size_t> pos{std::begin(kBlastOffGood), std::end(kBlastOffGood)};
  std::vector<std::size_t> neg{std::begin(kBlastOffBad), std::end(kBlastOffBad)};
  std::string out;
};

struct PreprocessArgs {
  std::string in, out;
  std::size_t frames = 160;
  double scale_lo = 1.0, scale_hi = 3.0;
  bool per_axis = false;
};

struct FeaturizeArgs {
  std::string in, out, rep;
};

struct TrainArgs {
  std::string features, model, rep = "joint-time", out;
  std::size_t frames = 160;
  std::optional<std::size_t> rounds, epochs;
  std::optional<double> nu, learning_rate;
};

struct EvalArgs {
  std::string data, rep, model, protocol = "random:80", out, roc;
  std::optional<std::size_t> runs, rounds;
  std::size_t threads = 0;
};

struct RocArgs {
  std::string report, out;
};

struct PredictArgs {
  std::string model, features, out;
};

struct ReproduceArgs {
  std::string out;
  std::size_t threads = 0;
};

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

void require_distinct(const std::string& in, const std::string& out) {
  std::error_code ec;
  if (in == out || (fs::exists(out, ec) && fs::equivalent(in, out, ec))) {
    throw UsageError("output path must differ from the input path '" + in + "'");
  }
}

std::string extension_of(const std::string& path) { return fs::path(path).extension().string(); }

/// Output dataset encoding: --format wins, but must not contradict a known
/// extension.
DatasetFormat output_dataset_format(const std::string& path, const Globals& g) {
  const std::string ext = extension_of(path);
  const bool csv_ext = ext == ".csv";
  const bool json_ext = ext == ".jsonl" || ext == ".json";
  if (g.format == "csv") {
    if (json_ext) throw UsageError("--format csv conflicts with output path '" + path + "'");
    return DatasetFormat::Csv;
  }
  if (g.format == "json") {
    if (csv_ext) throw UsageError("--format json conflicts with output path '" + path + "'");
    return DatasetFormat::Jsonl;
  }
  return csv_ext ? DatasetFormat::Csv : DatasetFormat::Jsonl;
}

FeatureFormat output_feature_format(const std::string& path, const Globals& g) {
  return output_dataset_format(path, g) == DatasetFormat::Csv ? FeatureFormat::Csv
                                                              : FeatureFormat::Jsonl;
}

FeatureFormat input_feature_format(const std::string& path) {
  return extension_of(path) == ".csv" ? FeatureFormat::Csv : FeatureFormat::Jsonl;
}

void require_single_format(const Globals& g, const char* command, const char* only) {
  if (!g.format.empty() && g.format != only) {
    throw UsageError(std::string(command) + " only writes " + only + "; got --format " + g.format);
  }
}

Representation require_rep(const std::string& name) {
  const auto rep = parse_representation(name);
  if (!rep) throw UsageError("unknown representation '" + name + "'");
  return *rep;
}

ClassifierSpec require_spec(const std::string& name) {
  const auto spec = ClassifierSpec::from_name(name);
  if (!spec) throw UsageError("unknown model '" + name + "'");
  return *spec;
}

void log_line(const Globals& g, std::ostream& err, const std::string& text) {
  if (!g.quiet) err << text << '\n';
}

std::size_t thread_count(std::size_t requested) {
  return requested == 0 ? default_thread_count() : requested;
}

FeatureTable featurize_dataset(const Dataset& dataset, Representation rep) {
  if (!dataset.preprocessed) {
    throw Error("dataset is not preprocessed; run 'lamq preprocess' first");
  }
  const std::size_t frames = dataset.samples.front().frames.size();
  std::vector<FeatureVector> vectors(dataset.samples.size());
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    try {
      vectors[i] = extract_features(dataset.samples[i], rep, frames);
    } catch (const Error& e) {
      throw Error("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  FeatureTable table;
  table.x = FeatureMatrix::from_vectors(vectors);
  for (const auto& s : dataset.samples) {
    table.subjects.push_back(s.subject_id);
    table.labels.push_back(s.label);
  }
  return table;
}

int cmd_generate(const GenerateArgs& a, const Globals& g, std::ostream& err) {
  const auto exercise = parse_exercise(a.exercise);
  if (!exercise) throw UsageError("unknown exercise '" + a.exercise + "'");
  if (a.subjects == 0) throw UsageError("--subjects must be at least 1");
  if (a.pos.size() != a.subjects || a.neg.size() != a.subjects) {
    throw UsageError("--pos and --neg need one count per subject (" + std::to_string(a.subjects) +
                     ")");
  }
  for (std::size_t c : a.pos) {
    if (c == 0) throw UsageError("--pos counts must be at least 1");
  }
  for (std::size_t c : a.neg) {
    if (c == 0) throw UsageError("--neg counts must be at least 1");
  }
  const DatasetFormat format = output_dataset_format(a.out, g);

  const Dataset dataset = generate_dataset(builtin_template(*exercise), a.pos, a.neg, g.seed);
  save_dataset(dataset, a.out, format);
  log_line(g, err, "wrote " + std::to_string(dataset.samples.size()) + " samples to " + a.out);
  return kExitOk;
}

int cmd_preprocess(const PreprocessArgs& a, const Globals& g, std::ostream& err) {
  require_distinct(a.in, a.out);
  PreprocessConfig config;
  config.target_frames = a.frames;
  config.scale_lo = a.scale_lo;
  config.scale_hi = a.scale_hi;
  config.per_axis_scaling = a.per_axis;
  try {
    config.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const DatasetFormat format = output_dataset_format(a.out, g);

  const Dataset raw = load_dataset(a.in, format_from_path(a.in));
  const Dataset prep = preprocess_dataset(raw, config);
  save_dataset(prep, a.out, format);
  log_line(g, err, "preprocessed " + std::to_string(prep.samples.size()) + " samples to " + a.out);
  return kExitOk;
}

int cmd_featurize(const FeaturizeArgs& a, const Globals& g, std::ostream& err) {
  require_distinct(a.in, a.out);
  const Representation rep = require_rep(a.rep);
  const FeatureFormat format = output_feature_format(a.out, g);

  const Dataset dataset = load_dataset(a.in, format_from_path(a.in));
  const FeatureTable table = featurize_dataset(dataset, rep);
  write_file_atomic(a.out, format == FeatureFormat::Csv ? features_to_csv(table)
                                                        : features_to_jsonl(table));
  log_line(g, err, "wrote " + std::to_string(table.x.rows()) + " x " +
                       std::to_string(table.x.cols()) + " features to " + a.out);
  return kExitOk;
}

int cmd_train(const TrainArgs& a, const Globals& g, std::ostream& err) {
  require_distinct(a.features, a.out);
  require_single_format(g, "train", "json");
  const Representation rep = require_rep(a.rep);
  ClassifierSpec spec = require_spec(a.model);
  if (a.frames < 2) throw UsageError("--frames must be at least 2");
  if (a.rounds) {
    if (spec.family != Family::AdaBoost) throw UsageError("--rounds only applies to adaboost");
    if (*a.rounds == 0) throw UsageError("--rounds must be at least 1");
    spec.adaboost.rounds = *a.rounds;
  }
  if (a.nu) {
    if (spec.family != Family::Svdd) throw UsageError("--nu only applies to svdd");
    if (!(*a.nu > 0.0 && *a.nu < 1.0)) throw UsageError("--nu must lie in (0, 1)");
    spec.svdd.nu = *a.nu;
  }
  if (a.epochs || a.learning_rate) {
    if (spec.family != Family::Nn) throw UsageError("--epochs and --learning-rate apply to nn and mnn");
    if (a.epochs) spec.nn.epochs = *a.epochs;
    if (a.learning_rate) {
      if (!(*a.learning_rate > 0.0)) throw UsageError("--learning-rate must be positive");
      spec.nn.learning_rate = *a.learning_rate;
    }
  }
  if (spec.family == Family::Dtw && is_frequency(rep)) {
    throw UsageError("dtw needs a time-domain representation, got " + a.rep);
  }

  const FeatureTable table = load_features(a.features, input_feature_format(a.features));
  const std::size_t expected = feature_dimension(rep, a.frames);
  if (table.x.cols() != expected) {
    throw Error("feature dimension mismatch: representation " + a.rep + " with " +
                std::to_string(a.frames) + " frames expects " + std::to_string(expected) +
                ", features file has " + std::to_string(table.x.cols()));
  }
  const TrainedModel model = train_model(spec, rep, table.x, table.labels, g.seed);
  write_file_atomic(a.out, model_to_json(model));
  log_line(g, err, "trained " + spec.name() + " on " + std::to_string(table.x.rows()) +
                       " samples; model written to " + a.out);
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, const Globals& g, std::ostream& err) {
  require_distinct(a.data, a.out);
  if (!a.roc.empty()) require_distinct(a.data, a.roc);
  if (!a.roc.empty() && a.roc == a.out) throw UsageError("--out and --roc must differ");
  require_single_format(g, "eval", "json");
  const Representation rep = require_rep(a.rep);
  ClassifierSpec spec = require_spec(a.model);
  Protocol protocol;
  try {
    protocol = Protocol::parse(a.protocol);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const bool holdout = protocol.kind == ProtocolKind::SubjectHoldout;
  const std::size_t runs = a.runs.value_or(holdout ? 1 : 51);
  if (runs == 0) throw UsageError("--runs must be at least 1");
  if (holdout && runs != 1) throw UsageError("holdout protocol is deterministic; it forces --runs 1");
  if (spec.family == Family::AdaBoost) {
    spec.adaboost.rounds = a.rounds.value_or(holdout ? kHoldoutBoostingRounds : kRandomSplitBoostingRounds);
    if (spec.adaboost.rounds == 0) throw UsageError("--rounds must be at least 1");
  } else if (a.rounds) {
    throw UsageError("--rounds only applies to adaboost");
  }
  if (spec.family == Family::Dtw && is_frequency(rep)) {
    throw UsageError("dtw needs a time-domain representation, got " + a.rep);
  }

  const Dataset dataset = load_dataset(a.data, format_from_path(a.data));
  const FeatureTable table = featurize_dataset(dataset, rep);
  const EvalReport report = run_protocol(table.x, table.labels, table.subjects, rep, spec, protocol,
                                         runs, g.seed, thread_count(a.threads));
  std::string roc_csv;
  if (!a.roc.empty()) roc_csv = roc_to_csv(roc_curve(report.runs));
  write_file_atomic(a.out, report_to_json(report));
  if (!a.roc.empty()) write_file_atomic(a.roc, roc_csv);
  log_line(g, err, spec.name() + " " + a.rep + " " + protocol.to_string() + ": mean accuracy " +
                       format_double(report.aggregate.mean_accuracy) + " over " +
                       std::to_string(runs) + " run(s)");
  return kExitOk;
}

int cmd_roc(const RocArgs& a, const Globals& g, std::ostream& err) {
  require_distinct(a.report, a.out);
  require_single_format(g, "roc", "csv");
  const EvalReport report = report_from_json(read_text_file(a.report));
  const RocCurve curve = roc_curve(report.runs);
  write_file_atomic(a.out, roc_to_csv(curve));
  log_line(g, err, "wrote " + std::to_string(curve.points.size()) + " ROC points to " + a.out);
  return kExitOk;
}

int cmd_predict(const PredictArgs& a, const Globals& g, std::ostream& err) {
  require_distinct(a.model, a.out);
  require_distinct(a.features, a.out);
  require_single_format(g, "predict", "csv");
  const TrainedModel model = model_from_json(read_text_file(a.model));
  const FeatureTable table = load_features(a.features, input_feature_format(a.features));
  std::string out = "subject_id,label,predicted,score\n";
  std::size_t correct = 0;
  for (std::size_t i = 0; i < table.x.rows(); ++i) {
    const Prediction p = predict(model, table.x.row(i));
    correct += p.label == table.labels[i];
    out += std::to_string(table.subjects[i]) + ',' + std::string(label_name(table.labels[i])) + ',' +
           std::string(label_name(p.label)) + ',';
    append_double(out, p.score);
    out += '\n';
  }
  write_file_atomic(a.out, out);
  log_line(g, err, std::to_string(correct) + "/" + std::to_string(table.x.rows()) +
                       " predictions match the stored labels");
  return kExitOk;
}

int cmd_reproduce(const ReproduceArgs& a, const Globals& g, std::ostream& err) {
  if (!g.format.empty()) throw UsageError("reproduce writes a fixed set of files; --format does not apply");
  if (a.out.empty()) throw UsageError("--out must name a directory");
  ReproduceOptions options;
  options.out_dir = a.out;
  options.seed = g.seed;
  options.threads = a.threads;
  reproduce(options, g.quiet ? nullptr : &err);
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exercise quality classification from 20-joint skeleton recordings", "lamq"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");
  app.add_option("--format", g.format, "Output encoding")->check(CLI::IsMember({"json", "csv"}));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("--exercise", gen.exercise, "Exercise name")->capture_default_str();
  generate->add_option("--subjects", gen.subjects, "Number of subjects")->capture_default_str();
  generate->add_option("--pos", gen.pos, "Good samples per subject")->delimiter(',');
  generate->add_option("--neg", gen.neg, "Bad samples per subject")->delimiter(',');
  generate->add_option("--out", gen.out, "Output dataset (.jsonl or .csv)")->required();

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand("preprocess", "Resample, scale and center a dataset");
  preprocess->add_option("--in", pre.in, "Raw dataset")->required()->check(CLI::ExistingFile);
  preprocess->add_option("--out", pre.out, "Preprocessed dataset")->required();
  preprocess->add_option("--frames", pre.frames, "Frames per sample")->capture_default_str();
  preprocess->add_option("--scale-lo", pre.scale_lo, "Lower bound of the scaled range")->capture_default_str();
  preprocess->add_option("--scale-hi", pre.scale_hi, "Upper bound of the scaled range")->capture_default_str();
  preprocess->add_flag("--per-axis-scaling", pre.per_axis, "Scale each axis independently");

  FeaturizeArgs feat;
  auto* featurize = app.add_subcommand("featurize", "Extract a feature representation");
  featurize->add_option("--in", feat.in, "Preprocessed dataset")->required()->check(CLI::ExistingFile);
  featurize->add_option("--rep", feat.rep, "joint-time, angle-time, joint-freq or angle-freq")->required();
  featurize->add_option("--out", feat.out, "Feature file (.csv or .jsonl)")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train one classifier on a feature file");
  train->add_option("--features", tr.features, "Feature file")->required()->check(CLI::ExistingFile);
  train->add_option("--model", tr.model, "svm, svdd, adaboost, dtw, nn or mnn")->required();
  train->add_option("--rep", tr.rep, "Representation of the feature file")->capture_default_str();
  train->add_option("--frames", tr.frames, "Frames per sample behind the features")->capture_default_str();
  train->add_option("--rounds", tr.rounds, "AdaBoost rounds");
  train->add_option("--nu", tr.nu, "SVDD outlier fraction");
  train->add_option("--epochs", tr.epochs, "NN epochs");
  train->add_option("--learning-rate", tr.learning_rate, "NN learning rate");
  train->add_option("--out", tr.out, "Model JSON")->required();

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Run an evaluation protocol");
  eval->add_option("--data", ev.data, "Preprocessed dataset")->required()->check(CLI::ExistingFile);
  eval->add_option("--rep", ev.rep, "Representation")->required();
  eval->add_option("--model", ev.model, "Classifier")->required();
  eval->add_option("--protocol", ev.protocol, "holdout:TRAIN/TEST or random:N")->capture_default_str();
  eval->add_option("--runs", ev.runs, "Number of runs (default 51 random, 1 holdout)");
  eval->add_option("--rounds", ev.rounds, "AdaBoost rounds (default 90 holdout, 300 random)");
  eval->add_option("--threads", ev.threads, "Worker threads, 0 for all cores")->capture_default_str();
  eval->add_option("--out", ev.out, "Report JSON")->required();
  eval->add_option("--roc", ev.roc, "ROC CSV of the median run");

  RocArgs ro;
  auto* roc = app.add_subcommand("roc", "ROC curve of the median run of a report");
  roc->add_option("--report", ro.report, "Report JSON")->required()->check(CLI::ExistingFile);
  roc->add_option("--out", ro.out, "ROC CSV")->required();

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "Score a feature file with a trained model");
  predict_cmd->add_option("--model", pr.model, "Model JSON")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--features", pr.features, "Feature file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", pr.out, "Predictions CSV")->required();

  ReproduceArgs rep;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run the full synthetic experiment grid");
  reproduce_cmd->add_option("--out", rep.out, "Output directory")->required();
  reproduce_cmd->add_option("--threads", rep.threads, "Worker threads, 0 for all cores")->capture_default_str();

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, g, err);
    if (preprocess->parsed()) return cmd_preprocess(pre, g, err);
    if (featurize->parsed()) return cmd_featurize(feat, g, err);
    if (train->parsed()) return cmd_train(tr, g, err);
    if (eval->parsed()) return cmd_eval(ev, g, err);
    if (roc->parsed()) return cmd_roc(ro, g, err);
    if (predict_cmd->parsed()) return cmd_predict(pr, g, err);
    return cmd_reproduce(rep, g, err);
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: runtime: " << one_line(e.what()) << '\n';
    return kExitRuntime;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, out, err);
}

}  // namespace lamq::cli
