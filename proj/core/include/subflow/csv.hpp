#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "subflow/grid.hpp"

namespace subflow {

/// Numeric table; missing fields are NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits; NaN prints as an empty field.
std::string format_number(double v);

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Reads comma-separated numbers. A first line that does not parse as numbers
/// is taken as the header. Throws ConfigError on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

/// Two-column table x,value on a uniform grid (relative spacing error <= 1e-6).
GridFunction read_grid_function(const std::filesystem::path& path);

CsvTable to_table(const GridFunction& u, const std::string& x_name, const std::string& value_name);

}  // namespace subflow
