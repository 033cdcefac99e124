#include "lamq_cli/feature_file.hpp"

#include <charconv>
#include <json.hpp>

#include "lamq/error.hpp"
#include "lamq/io_util.hpp"

namespace lamq::cli {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

int parse_subject(std::string_view text, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "invalid subject_id '" + std::string(text) + "'");
  }
  return value;
}

Label parse_label_at(std::string_view text, std::size_t line) {
  const auto label = parse_label(text);
  if (!label) throw ParseError(line, "invalid label '" + std::string(text) + "'");
  return *label;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (!line.empty()) fn(line, line_no);
    pos = end + 1;
  }
}

FeatureTable build(std::vector<int> subjects, std::vector<Label> labels,
                   const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ParseError(0, "no feature rows");
  FeatureTable table;
  table.subjects = std::move(subjects);
  table.labels = std::move(labels);
  table.x = FeatureMatrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), table.x.row(i).begin());
  }
  return table;
}

FeatureTable parse_csv(std::string_view text) {
  std::vector<int> subjects;
  std::vector<Label> labels;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool header_seen = false;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() < 3 || fields[0] != "subject_id" || fields[1] != "label") {
        throw ParseError(line_no, "expected header 'subject_id,label,v0,...'");
      }
      width = fields.size() - 2;
      header_seen = true;
      return;
    }
    if (fields.size() != width + 2) {
      throw ParseError(line_no, "row has " + std::to_string(fields.size() - 2) +
                                    " values, header declares " + std::to_string(width));
    }
    subjects.push_back(parse_subject(fields[0], line_no));
    labels.push_back(parse_label_at(fields[1], line_no));
    std::vector<double> row(width);
    for (std::size_t k = 0; k < width; ++k) {
      if (!parse_double(fields[k + 2], row[k])) {
        throw ParseError(line_no, "invalid value '" + std::string(fields[k + 2]) + "' in column v" +
                                      std::to_string(k));
      }
    }
    rows.push_back(std::move(row));
  });
  if (!header_seen) throw ParseError(0, "empty feature file");
  return build(std::move(subjects), std::move(labels), rows);
}

FeatureTable parse_jsonl(std::string_view text) {
  std::vector<int> subjects;
  std::vector<Label> labels;
  std::vector<std::vector<double>> rows;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      subjects.push_back(j.at("subject_id").get<int>());
      labels.push_back(parse_label_at(j.at("label").get<std::string>(), line_no));
      rows.push_back(j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (rows.back().size() != rows.front().size()) {
      throw ParseError(line_no, "row has " + std::to_string(rows.back().size()) +
                                    " values, first row has " + std::to_string(rows.front().size()));
    }
  });
  return build(std::move(subjects), std::move(labels), rows);
}

}  // namespace

std::string features_to_csv(const FeatureTable& table) {
  std::string out = "subject_id,label";
  for (std::size_t k = 0; k < table.x.cols(); ++k) out += ",v" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < table.x.rows(); ++i) {
    out += std::to_string(table.subjects[i]);
    out += ',';
    out += label_name(table.labels[i]);
    for (double v : table.x.row(i)) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string features_to_jsonl(const FeatureTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.x.rows(); ++i) {
    out += "{\"subject_id\":" + std::to_string(table.subjects[i]) + ",\"label\":\"";
    out += label_name(table.labels[i]);
    out += "\",\"values\":[";
    bool first = true;
    for (double v : table.x.row(i)) {
      if (!first) out += ',';
      first = false;
      append_double(out, v);
    }
    out += "]}\n";
  }
  return out;
}

FeatureTable parse_features(std::string_view text, FeatureFormat format) {
  return format == FeatureFormat::Csv ? parse_csv(text) : parse_jsonl(text);
}

FeatureTable load_features(const std::filesystem::path& path, FeatureFormat format) {
  return parse_features(read_text_file(path), format);
}

}  // namespace lamq::cli
