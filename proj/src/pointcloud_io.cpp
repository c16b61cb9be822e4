#include "maghull/pointcloud_io.hpp"

#include "json.hpp"

#include "maghull/error.hpp"
#include "maghull/textio.hpp"

namespace maghull {

PointCloud parse_csv_points(std::string_view text) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && parse_double(fields[k], row[k]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": non-numeric field");
    }
    first = false;
    if (dim == 0) dim = row.size();
    if (row.size() != dim)
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " + std::to_string(dim) + " columns");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) fail(ErrorCode::Parse, "no points in CSV input");
  return PointCloud(dim, std::move(coords));
}

std::string format_csv_points(const PointCloud& cloud) {
  std::string out;
  for (std::size_t k = 0; k < cloud.dim(); ++k) {
    if (k) out += ',';
    out += "x" + std::to_string(k);
  }
  out += '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out += ',';
      out += format_double(p[k]);
    }
    out += '\n';
  }
  return out;
}

PointCloud parse_json_points(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, e.what());
  }
  if (!j.is_array() || j.empty()) fail(ErrorCode::Parse, "expected a non-empty array of points");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) fail(ErrorCode::Parse, "each point must be an array of numbers");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) fail(ErrorCode::Parse, "non-numeric coordinate");
      row.push_back(v.get<double>());
    }
    if (!rows.empty() && row.size() != rows.front().size()) fail(ErrorCode::Parse, "ragged point arrays");
    rows.push_back(std::move(row));
  }
  if (rows.front().empty()) fail(ErrorCode::Parse, "points must have at least one coordinate");
  return PointCloud::from_rows(rows);
}

std::string format_json_points(const PointCloud& cloud) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point(i);
    j.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return j.dump() + "\n";
}

PointCloud read_points(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return path.extension() == ".json" ? parse_json_points(text) : parse_csv_points(text);
}

void write_points(const std::filesystem::path& path, const PointCloud& cloud) {
  write_file_atomic(path, path.extension() == ".json" ? format_json_points(cloud) : format_csv_points(cloud));
}

}  // namespace maghull
