#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "maghull/geometry.hpp"

namespace maghull {

/// One point per line, comma separated. A first line that does not parse as
/// numbers is taken as a header. Blank lines are skipped.
PointCloud parse_csv_points(std::string_view text);
/// `x0,...,x{d-1}` header, then 17-significant-digit rows.
std::string format_csv_points(const PointCloud& cloud);

/// JSON array of coordinate arrays.
PointCloud parse_json_points(std::string_view text);
std::string format_json_points(const PointCloud& cloud);

/// Dispatches on extension: `.json` is JSON, anything else CSV.
PointCloud read_points(const std::filesystem::path& path);
void write_points(const std::filesystem::path& path, const PointCloud& cloud);

}  // namespace maghull
