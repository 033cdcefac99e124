#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lamq/skeleton.hpp"

namespace lamq {

enum class DatasetFormat { Jsonl, Csv };

/// ".csv" selects CSV; everything else is treated as JSONL.
DatasetFormat format_from_path(const std::filesystem::path& path) noexcept;

/// Reads and validates every sample. Throws ParseError naming the offending
/// line for malformed records, and Error("no samples") for an empty input.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
Dataset read_dataset(std::istream& in, DatasetFormat format, std::string provenance = {});

/// Writes via temp file + rename so a failure never leaves a partial file.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path, DatasetFormat format);
void write_dataset(const Dataset& dataset, std::ostream& out, DatasetFormat format);

}  // namespace lamq
