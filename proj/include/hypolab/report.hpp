#pragma once

// Report artifacts: JSON with a fixed number format, CSV tables and SVG line plots.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hypolab::report {

using Json = nlohmann::ordered_json;

/// Bumped whenever a report field changes meaning or disappears.
inline constexpr int schema_version = 1;

/// %.17g; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double x);

/// Deterministic JSON text: keys in insertion order, floats as %.17g, non-finite floats as null,
/// two-space indentation and a trailing newline.
std::string dump(const Json& j);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Comma-separated, header row, LF line endings; fields are %.17g.
std::string to_csv(const Table& t);

Json table_to_json(const Table& t);
Table table_from_json(const Json& j);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::string annotation;
  std::vector<Series> series;
};

/// Standalone SVG. Nonpositive values are dropped on log axes; an empty plot still renders its frame.
std::string to_svg(const Plot& p);

Json plot_to_json(const Plot& p);
Plot plot_from_json(const Json& j);

/// Writes bytes verbatim (binary mode, so LF endings survive on every platform).
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace hypolab::report
