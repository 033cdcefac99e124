#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lamq/features.hpp"
#include "lamq/skeleton.hpp"

namespace lamq::cli {

/// One row per sample: subject, label and the feature values.
struct FeatureTable {
  std::vector<int> subjects;
  std::vector<Label> labels;
  FeatureMatrix x;
};

enum class FeatureFormat { Csv, Jsonl };

/// Header `subject_id,label,v0,v1,...`, then one row per sample.
std::string features_to_csv(const FeatureTable& table);
/// One object per line: {"subject_id":1,"label":"good","values":[...]}.
std::string features_to_jsonl(const FeatureTable& table);

/// Throws ParseError naming the line for malformed input.
FeatureTable parse_features(std::string_view text, FeatureFormat format);
FeatureTable load_features(const std::filesystem::path& path, FeatureFormat format);

}  // namespace lamq::cli
