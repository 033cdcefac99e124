#include "lamq/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lamq/error.hpp"
#include "lamq/io_util.hpp"

namespace lamq {

namespace {

using nlohmann::json;

void check_valid(const SkeletonSample& sample, std::size_t line) {
  auto result = validate_sample(sample);
  if (!result.ok()) throw ParseError(line, result.violations.front());
}

SkeletonSample parse_json_record(const std::string& text, std::size_t line, bool& preprocessed) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line, "record is not a JSON object");

  auto field = [&](const char* name) -> const json& {
    auto it = record.find(name);
    if (it == record.end()) throw ParseError(line, std::string("missing field '") + name + "'");
    return *it;
  };

  SkeletonSample sample;
  const json& subject = field("subject_id");
  if (!subject.is_number_integer()) throw ParseError(line, "subject_id must be an integer");
  sample.subject_id = subject.get<int>();

  const json& exercise = field("exercise");
  if (!exercise.is_string()) throw ParseError(line, "exercise must be a string");
  auto ex = parse_exercise(exercise.get<std::string>());
  if (!ex) throw ParseError(line, "unknown exercise '" + exercise.get<std::string>() + "'");
  sample.exercise = *ex;

  const json& label = field("label");
  if (!label.is_string()) throw ParseError(line, "label must be a string");
  auto lab = parse_label(label.get<std::string>());
  if (!lab) throw ParseError(line, "unknown label '" + label.get<std::string>() + "'");
  sample.label = *lab;

  preprocessed = false;
  if (auto it = record.find("preprocessed"); it != record.end()) {
    if (!it->is_boolean()) throw ParseError(line, "preprocessed must be a boolean");
    preprocessed = it->get<bool>();
  }

  const json& frames = field("frames");
  if (!frames.is_array()) throw ParseError(line, "frames must be an array");
  sample.frames.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const json& joints = frames[f];
    if (!joints.is_array()) throw ParseError(line, "frame " + std::to_string(f) + " is not an array");
    if (joints.size() != kJointCount) {
      throw ParseError(line, "frame " + std::to_string(f) + " has " + std::to_string(joints.size()) +
                                 " joints, expected 20");
    }
    Frame frame;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const json& p = joints[j];
      if (!p.is_array() || p.size() != 3) {
        throw ParseError(line, "frame " + std::to_string(f) + ", joint " + std::to_string(j) +
                                   " is not an [x, y, z] triple");
      }
      for (std::size_t a = 0; a < 3; ++a) {
        if (!p[a].is_number()) {
          throw ParseError(line, "frame " + std::to_string(f) + ", joint " + std::to_string(j) +
                                     " has a non-numeric coordinate");
        }
        frame.joints[j][a] = p[a].get<double>();
      }
    }
    sample.frames.push_back(frame);
  }
  check_valid(sample, line);
  return sample;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view text, long long& value) {
  text = trim(text);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

constexpr std::size_t kCsvColumns = 5 + 3 * kJointCount;

std::string csv_header() {
  std::string h = "subject_id,exercise,label,sample_idx,frame_idx";
  for (std::size_t j = 0; j < kJointCount; ++j) {
    for (char axis : {'x', 'y', 'z'}) {
      h += ",j" + std::to_string(j) + axis;
    }
  }
  return h;
}

Dataset read_csv(std::istream& in) {
  Dataset dataset;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  long long current_idx = -1;
  std::size_t sample_start_line = 0;
  std::optional<SkeletonSample> current;

  auto finish = [&] {
    if (current) {
      check_valid(*current, sample_start_line);
      dataset.samples.push_back(std::move(*current));
      current.reset();
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (view.rfind("subject_id", 0) == 0) continue;
    }
    auto fields = split_commas(view);
    if (fields.size() != kCsvColumns) {
      throw ParseError(line_no, "expected " + std::to_string(kCsvColumns) + " columns, got " +
                                    std::to_string(fields.size()));
    }
    long long subject = 0, sample_idx = 0, frame_idx = 0;
    if (!parse_int(fields[0], subject)) throw ParseError(line_no, "bad subject_id");
    auto ex = parse_exercise(trim(fields[1]));
    if (!ex) throw ParseError(line_no, "unknown exercise '" + std::string(trim(fields[1])) + "'");
    auto lab = parse_label(trim(fields[2]));
    if (!lab) throw ParseError(line_no, "unknown label '" + std::string(trim(fields[2])) + "'");
    if (!parse_int(fields[3], sample_idx)) throw ParseError(line_no, "bad sample_idx");
    if (!parse_int(fields[4], frame_idx)) throw ParseError(line_no, "bad frame_idx");

    if (!current || sample_idx != current_idx) {
      finish();
      current.emplace();
      current->subject_id = static_cast<int>(subject);
      current->exercise = *ex;
      current->label = *lab;
      current_idx = sample_idx;
      sample_start_line = line_no;
    } else if (current->subject_id != subject || current->exercise != *ex ||
               current->label != *lab) {
      throw ParseError(line_no, "sample metadata changes within sample " +
                                    std::to_string(sample_idx));
    }
    if (frame_idx != static_cast<long long>(current->frames.size())) {
      throw ParseError(line_no, "frame_idx " + std::to_string(frame_idx) + " out of order, expected " +
                                    std::to_string(current->frames.size()));
    }
    Frame frame;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      for (std::size_t a = 0; a < 3; ++a) {
        double v = 0.0;
        if (!parse_double(fields[5 + 3 * j + a], v)) {
          throw ParseError(line_no, "bad coordinate for joint " + std::to_string(j));
        }
        if (!std::isfinite(v)) {
          throw ParseError(line_no, "non-finite coordinate at frame " + std::to_string(frame_idx) +
                                        ", joint " + std::to_string(j));
        }
        frame.joints[j][a] = v;
      }
    }
    current->frames.push_back(frame);
  }
  if (in.bad()) throw Error("read failed");
  finish();
  return dataset;
}

Dataset read_jsonl(std::istream& in) {
  Dataset dataset;
  std::string line;
  std::size_t line_no = 0;
  std::optional<bool> preprocessed;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    bool flag = false;
    dataset.samples.push_back(parse_json_record(line, line_no, flag));
    if (preprocessed && *preprocessed != flag) {
      throw ParseError(line_no, "mixed raw and preprocessed records");
    }
    preprocessed = flag;
  }
  if (in.bad()) throw Error("read failed");
  dataset.preprocessed = preprocessed.value_or(false);
  return dataset;
}

void append_point(std::string& out, const Vec3& p) {
  out += '[';
  append_double(out, p[0]);
  out += ',';
  append_double(out, p[1]);
  out += ',';
  append_double(out, p[2]);
  out += ']';
}

}  // namespace

DatasetFormat format_from_path(const std::filesystem::path& path) noexcept {
  return path.extension() == ".csv" ? DatasetFormat::Csv : DatasetFormat::Jsonl;
}

Dataset read_dataset(std::istream& in, DatasetFormat format, std::string provenance) {
  Dataset dataset = format == DatasetFormat::Csv ? read_csv(in) : read_jsonl(in);
  if (dataset.samples.empty()) throw ParseError(0, "no samples");
  dataset.provenance = std::move(provenance);
  return dataset;
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_dataset(in, format, path.string());
}

void write_dataset(const Dataset& dataset, std::ostream& out, DatasetFormat format) {
  std::string buf;
  if (format == DatasetFormat::Csv) {
    out << csv_header() << '\n';
    for (std::size_t s = 0; s < dataset.samples.size(); ++s) {
      const SkeletonSample& sample = dataset.samples[s];
      for (std::size_t f = 0; f < sample.frames.size(); ++f) {
        buf.clear();
        buf += std::to_string(sample.subject_id);
        buf += ',';
        buf += exercise_name(sample.exercise);
        buf += ',';
        buf += label_name(sample.label);
        buf += ',' + std::to_string(s) + ',' + std::to_string(f);
        for (const Vec3& p : sample.frames[f].joints) {
          for (double v : p) {
            buf += ',';
            append_double(buf, v);
          }
        }
        buf += '\n';
        out << buf;
      }
    }
    return;
  }
  for (const SkeletonSample& sample : dataset.samples) {
    buf.clear();
    buf += "{\"subject_id\":" + std::to_string(sample.subject_id);
    buf += ",\"exercise\":\"";
    buf += exercise_name(sample.exercise);
    buf += "\",\"label\":\"";
    buf += label_name(sample.label);
    buf += '"';
    if (dataset.preprocessed) buf += ",\"preprocessed\":true";
    buf += ",\"frames\":[";
    for (std::size_t f = 0; f < sample.frames.size(); ++f) {
      if (f) buf += ',';
      buf += '[';
      for (std::size_t j = 0; j < kJointCount; ++j) {
        if (j) buf += ',';
        append_point(buf, sample.frames[f].joints[j]);
      }
      buf += ']';
    }
    buf += "]}\n";
    out << buf;
  }
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path, DatasetFormat format) {
  std::ostringstream out;
  write_dataset(dataset, out, format);
  write_file_atomic(path, out.str());
}

}  // namespace lamq
