#pragma once

#include <charconv>
#include <filesystem>
#include <string>
#include <string_view>

namespace lamq {

std::string read_text_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
void append_double(std::string& out, double value);

/// Parses a whole field as a double; rejects trailing garbage.
bool parse_double(std::string_view text, double& value) noexcept;

}  // namespace lamq
