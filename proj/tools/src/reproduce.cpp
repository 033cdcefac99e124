#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lamq/error.hpp"
#include "lamq/eval.hpp"
#include "lamq/io_util.hpp"
#include "lamq/parallel.hpp"
#include "lamq/preprocess.hpp"
#include "lamq/syndata.hpp"
#include "lamq_cli/cli.hpp"

namespace lamq::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kSyntheticBanner = "synthetic data — not the paper's dataset";
constexpr std::size_t kRandomRuns = 51;
constexpr std::size_t kRandomTrain = 80;

constexpr Representation kColumns[] = {Representation::JointTime, Representation::AngleTime,
                                       Representation::JointFreq, Representation::AngleFreq};

struct Row {
  const char* model;  // ClassifierSpec name
  const char* title;
};

constexpr Row kMainRows[] = {{"svm", "SVM"},
                             {"nn", "Single-layer NN"},
                             {"mnn", "Multi-layer NN"},
                             {"adaboost", "AdaBoosted tree"},
                             {"dtw", "DTW"}};
constexpr Row kOneClassRow{"svdd", "One-class SVM"};

struct ProtocolRun {
  const char* key;
  const char* title;
  Protocol protocol;
  std::size_t runs;
  std::size_t rounds;
};

std::vector<ProtocolRun> protocols() {
  Protocol holdout;
  holdout.kind = ProtocolKind::SubjectHoldout;
  holdout.holdout.train_subjects = {3, 4, 5};
  holdout.holdout.test_subjects = {1, 2};
  Protocol random;
  random.kind = ProtocolKind::RandomSplit;
  random.n_train = kRandomTrain;
  return {{"holdout", "3 vs. 2 training", holdout, 1, kHoldoutBoostingRounds},
          {"random", "random sample training", random, kRandomRuns, kRandomSplitBoostingRounds}};
}

struct Cell {
  std::size_t protocol;
  const char* model;
  Representation rep;
  std::optional<EvalReport> report;
};

template <class Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw Error("reproduce stage '" + name + "' failed: " + e.what());
  }
}

std::string cell_file(const char* model, Representation rep) {
  return std::string(model) + "_" + std::string(representation_name(rep));
}

std::string format_percent(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * accuracy);
  return buf;
}

std::string render_table(const std::string& title, std::span<const Row> rows,
                         const std::function<std::optional<double>(const char*, Representation)>& lookup) {
  constexpr int kTitleWidth = 16;
  constexpr int kCellWidth = 11;
  auto pad = [](std::string s, int width, bool right) {
    const int fill = width - static_cast<int>(s.size());
    if (fill <= 0) return s;
    return right ? std::string(fill, ' ') + s : s + std::string(fill, ' ');
  };
  std::string out;
  out += kSyntheticBanner;
  out += '\n';
  out += title + '\n';
  out += '\n';
  out += "| " + pad("Classifier", kTitleWidth, false);
  for (const char* h : {"Time joint", "Time angle", "Freq joint", "Freq angle"}) {
    out += " | " + pad(h, kCellWidth, true);
  }
  out += " |\n|" + std::string(kTitleWidth + 2, '-');
  for (int i = 0; i < 4; ++i) out += "|" + std::string(kCellWidth + 2, '-');
  out += "|\n";
  for (const Row& row : rows) {
    out += "| " + pad(row.title, kTitleWidth, false);
    for (Representation rep : kColumns) {
      const auto value = lookup(row.model, rep);
      out += " | " + pad(value ? format_percent(*value) : "-", kCellWidth, true);
    }
    out += " |\n";
  }
  return out;
}

std::string dataset_summary(const Dataset& dataset, const std::vector<ProtocolRun>& runs) {
  std::map<int, std::pair<std::size_t, std::size_t>> counts;  // good, bad
  for (const auto& s : dataset.samples) {
    auto& c = counts[s.subject_id];
    (s.label == Label::Good ? c.first : c.second)++;
  }
  nlohmann::ordered_json doc;
  doc["note"] = kSyntheticBanner;
  doc["provenance"] = dataset.provenance;
  doc["samples"] = dataset.samples.size();
  nlohmann::ordered_json subjects = nlohmann::ordered_json::array();
  for (const auto& [id, c] : counts) {
    subjects.push_back({{"subject_id", id}, {"good", c.first}, {"bad", c.second}});
  }
  doc["subjects"] = subjects;
  nlohmann::ordered_json protocols_doc = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    SplitSpec spec = r.protocol.kind == ProtocolKind::SubjectHoldout
                         ? SplitSpec{r.protocol.holdout}
                         : SplitSpec{RandomSplit{r.protocol.n_train, 0}};
    const SplitIndices idx = split_indices(dataset, spec);
    protocols_doc.push_back({{"protocol", r.protocol.to_string()},
                             {"runs", r.runs},
                             {"adaboost_rounds", r.rounds},
                             {"train", idx.train.size()},
                             {"test", idx.test.size()}});
  }
  doc["protocols"] = protocols_doc;
  return doc.dump(2) + "\n";
}

}  // namespace

void reproduce(const ReproduceOptions& options, std::ostream* log) {
  std::mutex log_mutex;
  auto say = [&](const std::string& text) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    *log << text << '\n';
  };
  const std::size_t threads = options.threads == 0 ? default_thread_count() : options.threads;
  const fs::path out_dir = options.out_dir;
  const fs::path staging = out_dir / ".lamq-staging";

  stage("prepare output", [&] {
    fs::create_directories(out_dir);
    fs::remove_all(staging);
    for (const char* sub : {"reports/holdout", "reports/random", "roc/holdout", "roc/random"}) {
      fs::create_directories(staging / sub);
    }
  });

  try {
    const Dataset dataset = stage("generate", [&] {
      return generate_dataset(builtin_template(Exercise::BlastOff), kBlastOffGood, kBlastOffBad,
                              options.seed);
    });
    say("generated " + std::to_string(dataset.samples.size()) + " synthetic Blast-Off samples");
    const Dataset prep = stage("preprocess", [&] { return preprocess_dataset(dataset, {}); });

    std::vector<int> subjects;
    std::vector<Label> labels;
    for (const auto& s : prep.samples) {
      subjects.push_back(s.subject_id);
      labels.push_back(s.label);
    }
    std::map<Representation, FeatureMatrix> features;
    stage("featurize", [&] {
      std::vector<FeatureMatrix> mats(std::size(kColumns));
      parallel_for(mats.size(), threads, [&](std::size_t r) {
        std::vector<FeatureVector> vectors;
        vectors.reserve(prep.samples.size());
        for (const auto& s : prep.samples) vectors.push_back(extract_features(s, kColumns[r], 160));
        mats[r] = FeatureMatrix::from_vectors(vectors);
      });
      for (std::size_t r = 0; r < mats.size(); ++r) features[kColumns[r]] = std::move(mats[r]);
    });

    const std::vector<ProtocolRun> runs = protocols();
    std::vector<Cell> cells;
    for (std::size_t p = 0; p < runs.size(); ++p) {
      for (const Row& row : kMainRows) {
        for (Representation rep : kColumns) {
          if (std::string_view(row.model) == "dtw" && is_frequency(rep)) continue;
          cells.push_back({p, row.model, rep, std::nullopt});
        }
      }
      for (Representation rep : kColumns) cells.push_back({p, kOneClassRow.model, rep, std::nullopt});
    }

    std::size_t done = 0;
    parallel_for(cells.size(), threads, [&](std::size_t i) {
      Cell& cell = cells[i];
      const ProtocolRun& pr = runs[cell.protocol];
      const std::string name = std::string(pr.key) + " " + cell_file(cell.model, cell.rep);
      cell.report = stage("evaluate " + name, [&] {
        ClassifierSpec spec = *ClassifierSpec::from_name(cell.model);
        spec.adaboost.rounds = pr.rounds;
        return run_protocol(features.at(cell.rep), labels, subjects, cell.rep, spec, pr.protocol,
                            pr.runs, options.seed, 1);
      });
      std::lock_guard lock(log_mutex);
      ++done;
      if (log) {
        *log << "[" << done << "/" << cells.size() << "] " << name << ": mean accuracy "
             << format_percent(cell.report->aggregate.mean_accuracy) << "%\n";
      }
    });

    stage("write results", [&] {
      for (const Cell& cell : cells) {
        const std::string base = cell_file(cell.model, cell.rep);
        const char* key = runs[cell.protocol].key;
        write_file_atomic(staging / "reports" / key / (base + ".json"), report_to_json(*cell.report));
        write_file_atomic(staging / "roc" / key / (base + ".csv"),
                          roc_to_csv(roc_curve(cell.report->runs)));
      }
      auto lookup_in = [&](std::size_t p) {
        return [&, p](const char* model, Representation rep) -> std::optional<double> {
          for (const Cell& c : cells) {
            if (c.protocol == p && std::string_view(c.model) == model && c.rep == rep) {
              return c.report->aggregate.mean_accuracy;
            }
          }
          return std::nullopt;
        };
      };
      for (std::size_t p = 0; p < runs.size(); ++p) {
        const ProtocolRun& pr = runs[p];
        std::string title = "Quality classifier % accuracy (" + std::string(pr.title) + ", " +
                            pr.protocol.to_string() + ", " + std::to_string(pr.runs) +
                            (pr.runs == 1 ? " run" : " runs") + ", AdaBoost " +
                            std::to_string(pr.rounds) + " rounds, seed " +
                            std::to_string(options.seed) + ")";
        write_file_atomic(staging / ("table_" + std::string(pr.key) + ".txt"),
                          render_table(title, kMainRows, lookup_in(p)));
      }
      std::string one_class;
      for (std::size_t p = 0; p < runs.size(); ++p) {
        const Row row{kOneClassRow.model, kOneClassRow.title};
        std::string title = "One-class SVM % accuracy (" + std::string(runs[p].title) + ", " +
                            runs[p].protocol.to_string() + ", seed " + std::to_string(options.seed) + ")";
        if (!one_class.empty()) one_class += '\n';
        one_class += render_table(title, std::span<const Row>(&row, 1), lookup_in(p));
      }
      write_file_atomic(staging / "table_one_class.txt", one_class);
      write_file_atomic(staging / "dataset_summary.json", dataset_summary(prep, runs));
    });

    stage("commit output", [&] {
      for (const char* entry : {"reports", "roc", "table_holdout.txt", "table_random.txt",
                                "table_one_class.txt", "dataset_summary.json"}) {
        fs::remove_all(out_dir / entry);
        fs::rename(staging / entry, out_dir / entry);
      }
      fs::remove(staging);
    });
    say("results written to " + out_dir.string());
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
}

}  // namespace lamq::cli
