#include "lamq/classifiers/model.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "common.hpp"

namespace lamq {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kModelFormatVersion = 1;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ordered_json encode_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) throw InvalidArgument("cannot serialize NaN");
  return v > 0 ? "inf" : "-inf";
}

double decode_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error("model JSON: expected a number");
}

ordered_json encode_vector(std::span<const double> values) {
  ordered_json arr = ordered_json::array();
  for (double v : values) arr.push_back(encode_real(v));
  return arr;
}

std::vector<double> decode_vector(const json& j) {
  if (!j.is_array()) throw Error("model JSON: expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(decode_real(v));
  return out;
}

ordered_json encode_nn_config(const NnConfig& c) {
  return {{"hidden_sizes", c.hidden_sizes},
          {"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"standardize", c.standardize}};
}

NnConfig decode_nn_config(const json& j) {
  NnConfig c;
  c.hidden_sizes = j.at("hidden_sizes").get<std::vector<std::size_t>>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.standardize = j.at("standardize").get<bool>();
  return c;
}

FeatureMatrix positives_of(const FeatureMatrix& x, std::span<const Label> y) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == Label::Good) rows.push_back(i);
  }
  if (rows.empty()) throw InvalidArgument("no Good samples to train a one-class model");
  return x.select_rows(rows);
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::Svm: return "svm";
    case Family::Svdd: return "svdd";
    case Family::AdaBoost: return "adaboost";
    case Family::Dtw: return "dtw";
    case Family::Nn: return "nn";
  }
  return "";
}

std::optional<ClassifierSpec> ClassifierSpec::from_name(std::string_view name) {
  ClassifierSpec spec;
  if (name == "svm") {
    spec.family = Family::Svm;
  } else if (name == "svdd") {
    spec.family = Family::Svdd;
  } else if (name == "adaboost") {
    spec.family = Family::AdaBoost;
  } else if (name == "dtw") {
    spec.family = Family::Dtw;
  } else if (name == "nn") {
    spec.family = Family::Nn;
  } else if (name == "mnn") {
    spec.family = Family::Nn;
    spec.nn = NnConfig::multi_layer();
  } else {
    return std::nullopt;
  }
  return spec;
}

std::string ClassifierSpec::name() const {
  if (family == Family::Nn && nn.hidden_sizes.size() > 1) return "mnn";
  return std::string(family_name(family));
}

std::size_t TrainedModel::input_dim() const noexcept {
  return std::visit(Overloaded{
                        [](const LinearSvmModel& m) { return m.weights.size(); },
                        [](const SvddModel& m) { return m.center.size(); },
                        [](const AdaBoostModel& m) { return m.feature_dim; },
                        [](const DtwModel& m) { return m.templ.size(); },
                        [](const NnModel& m) { return m.input_dim(); },
                    },
                    params);
}

Prediction predict(const TrainedModel& model, std::span<const double> x) {
  const std::size_t dim = model.input_dim();
  if (dim != 0) detail::require_dim(dim, x.size());
  const double score = std::visit([&](const auto& m) { return m.score(x); }, model.params);
  if (!std::isfinite(score)) throw Error("model produced a non-finite score");
  return {score > 0.0 ? Label::Good : Label::Bad, score};
}

TrainedModel train_model(const ClassifierSpec& spec, Representation rep, const FeatureMatrix& x,
                         std::span<const Label> y, std::uint64_t seed) {
  detail::require_rows(x, y);
  TrainedModel model;
  model.rep = rep;
  switch (spec.family) {
    case Family::Svm: {
      SvmConfig config = spec.svm;
      config.seed = seed;
      model.params = svm_train(x, y, config);
      break;
    }
    case Family::Svdd:
      model.params = svdd_train(positives_of(x, y), spec.svdd.nu);
      break;
    case Family::AdaBoost:
      model.params = adaboost_train(x, y, spec.adaboost);
      break;
    case Family::Dtw:
      if (is_frequency(rep)) {
        throw InvalidArgument("dtw works on time-domain representations only");
      }
      model.params = dtw_train(positives_of(x, y), channel_count(rep));
      break;
    case Family::Nn: {
      NnConfig config = spec.nn;
      config.seed = seed;
      model.params = nn_train(x, y, config);
      break;
    }
  }
  return model;
}

std::string model_to_json(const TrainedModel& model) {
  ordered_json doc;
  doc["format"] = "lamq-model";
  doc["version"] = kModelFormatVersion;
  doc["family"] = family_name(model.family());
  doc["representation"] = representation_name(model.rep);
  std::visit(Overloaded{
                 [&](const LinearSvmModel& m) {
                   doc["config"] = {{"lambda", m.config.lambda},
                                    {"epochs", m.config.epochs},
                                    {"seed", m.config.seed},
                                    {"standardize", m.config.standardize}};
                   doc["params"] = {{"bias", encode_real(m.bias)},
                                    {"weights", encode_vector(m.weights)}};
                 },
                 [&](const SvddModel& m) {
                   doc["config"] = {{"nu", m.nu}};
                   doc["params"] = {{"radius_sq", encode_real(m.radius_sq)},
                                    {"center", encode_vector(m.center)}};
                 },
                 [&](const AdaBoostModel& m) {
                   doc["config"] = {{"rounds", m.rounds}};
                   ordered_json stumps = ordered_json::array();
                   for (const Stump& s : m.stumps) {
                     stumps.push_back({{"feature_index", s.feature_index},
                                       {"threshold", encode_real(s.threshold)},
                                       {"polarity", s.polarity},
                                       {"alpha", encode_real(s.alpha)}});
                   }
                   doc["params"] = {{"feature_dim", m.feature_dim}, {"stumps", stumps}};
                 },
                 [&](const DtwModel& m) {
                   doc["config"] = ordered_json::object();
                   doc["params"] = {{"frame_dim", m.frame_dim},
                                    {"threshold", encode_real(m.threshold)},
                                    {"template", encode_vector(m.templ)}};
                 },
                 [&](const NnModel& m) {
                   doc["config"] = encode_nn_config(m.config);
                   ordered_json layers = ordered_json::array();
                   for (const DenseLayer& layer : m.layers) {
                     std::vector<double> w;
                     w.reserve(static_cast<std::size_t>(layer.weights.size()));
                     for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
                       for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                         w.push_back(layer.weights(r, c));
                       }
                     }
                     layers.push_back(
                         {{"rows", layer.weights.rows()},
                          {"cols", layer.weights.cols()},
                          {"weights", encode_vector(w)},
                          {"bias", encode_vector({layer.bias.data(),
                                                  static_cast<std::size_t>(layer.bias.size())})}});
                   }
                   doc["params"] = {
                       {"input_mean", encode_vector({m.input_mean.data(),
                                                     static_cast<std::size_t>(m.input_mean.size())})},
                       {"input_scale", encode_vector({m.input_scale.data(),
                                                      static_cast<std::size_t>(m.input_scale.size())})},
                       {"layers", layers}};
                 },
             },
             model.params);
  return doc.dump() + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != "lamq-model") throw Error("model JSON: not a lamq model");
    if (doc.at("version") != kModelFormatVersion) {
      throw Error("model JSON: unsupported version " + doc.at("version").dump());
    }
    TrainedModel model;
    auto rep = parse_representation(doc.at("representation").get<std::string>());
    if (!rep) throw Error("model JSON: unknown representation");
    model.rep = *rep;
    const std::string family = doc.at("family").get<std::string>();
    const json& config = doc.at("config");
    const json& params = doc.at("params");
    if (family == "svm") {
      LinearSvmModel m;
      m.config.lambda = config.at("lambda").get<double>();
      m.config.epochs = config.at("epochs").get<std::size_t>();
      m.config.seed = config.at("seed").get<std::uint64_t>();
      m.config.standardize = config.at("standardize").get<bool>();
      m.bias = decode_real(params.at("bias"));
      m.weights = decode_vector(params.at("weights"));
      model.params = std::move(m);
    } else if (family == "svdd") {
      SvddModel m;
      m.nu = config.at("nu").get<double>();
      m.radius_sq = decode_real(params.at("radius_sq"));
      m.center = decode_vector(params.at("center"));
      model.params = std::move(m);
    } else if (family == "adaboost") {
      AdaBoostModel m;
      m.rounds = config.at("rounds").get<std::size_t>();
      m.feature_dim = params.at("feature_dim").get<std::size_t>();
      for (const auto& s : params.at("stumps")) {
        m.stumps.push_back({s.at("feature_index").get<std::size_t>(), decode_real(s.at("threshold")),
                            s.at("polarity").get<int>(), decode_real(s.at("alpha"))});
      }
      model.params = std::move(m);
    } else if (family == "dtw") {
      DtwModel m;
      m.frame_dim = params.at("frame_dim").get<std::size_t>();
      m.threshold = decode_real(params.at("threshold"));
      m.templ = decode_vector(params.at("template"));
      if (m.frame_dim == 0 || m.templ.size() % m.frame_dim != 0) {
        throw Error("model JSON: template is not a whole number of frames");
      }
      model.params = std::move(m);
    } else if (family == "nn") {
      NnModel m;
      m.config = decode_nn_config(config);
      for (const auto& l : params.at("layers")) {
        const auto rows = l.at("rows").get<Eigen::Index>();
        const auto cols = l.at("cols").get<Eigen::Index>();
        const auto w = decode_vector(l.at("weights"));
        const auto b = decode_vector(l.at("bias"));
        if (w.size() != static_cast<std::size_t>(rows * cols) ||
            b.size() != static_cast<std::size_t>(rows)) {
          throw Error("model JSON: layer shape mismatch");
        }
        DenseLayer layer;
        layer.weights.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
          for (Eigen::Index c = 0; c < cols; ++c) layer.weights(r, c) = w[r * cols + c];
        }
        layer.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
        m.layers.push_back(std::move(layer));
      }
      const auto mean = decode_vector(params.at("input_mean"));
      const auto scale = decode_vector(params.at("input_scale"));
      if (mean.size() != scale.size() ||
          (!mean.empty() && (m.layers.empty() || mean.size() != m.input_dim()))) {
        throw Error("model JSON: input standardization shape mismatch");
      }
      m.input_mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
      m.input_scale = Eigen::Map<const Eigen::VectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()));
      model.params = std::move(m);
    } else {
      throw Error("model JSON: unknown family '" + family + "'");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
}

}  // namespace lamq
