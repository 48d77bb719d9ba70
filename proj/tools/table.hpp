#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qradar::cli {

struct HeatmapLayout {
  std::size_t x_column = 0;
  std::size_t y_column = 1;
  std::size_t value_column = 2;
  std::size_t nx = 0;  // rows are ordered x-major: row = ix * ny + iy
  std::size_t ny = 0;
  bool log_y = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> metadata;  // written as "# ..." lines
  std::vector<bool> plotted;          // per column; column 0 is the x axis
  bool log_x = false;
  bool log_y = false;
  std::optional<HeatmapLayout> heatmap;

  void add_column(const std::string& name, bool plot);
  std::size_t column(const std::string& name) const;
};

/// 15 significant digits, '#' metadata first, RFC 4180 quoting of header names.
void write_csv(std::ostream& out, const CsvTable& table);
std::string format_number(double v);

/// Line chart (one polyline per plotted column) or heatmap. Throws ConfigError
/// for an empty table.
std::string render_svg(const CsvTable& table);

}  // namespace qradar::cli
