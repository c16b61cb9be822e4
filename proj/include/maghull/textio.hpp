#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace maghull {

/// Shortest decimal form that parses back to the same double ('.' decimal
/// point, locale independent).
std::string format_double(double value);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Splits one CSV line on commas, trimming surrounding whitespace.
std::vector<std::string> split_csv_line(std::string_view line);

/// Strict decimal parse of a whole field; false when the field is not a number.
bool parse_double(std::string_view field, double& out);

}  // namespace maghull
