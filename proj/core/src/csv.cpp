#include "subflow/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "subflow/error.hpp"

namespace subflow {
namespace {

bool parse_field(std::string_view field, double& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (field.empty()) {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  if (field == "inf" || field == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (field.front() == '+') field.remove_prefix(1);
  const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && p == field.data() + field.size();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, p);
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  write_csv(out, table);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line);
    std::vector<double> row(fields.size());
    bool ok = true;
    for (std::size_t i = 0; i < fields.size() && ok; ++i) ok = parse_field(fields[i], row[i]);
    if (!ok) {
      if (table.header.empty() && table.rows.empty()) {
        table.header = fields;
        continue;
      }
      fail(ErrorKind::ConfigError,
           path.string() + ": line " + std::to_string(lineno) + " is not numeric");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

GridFunction read_grid_function(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  // fewer than 3 samples is left to the consumers, which report GridTooCoarse
  if (table.rows.size() < 2) fail(ErrorKind::GridTooCoarse, path.string() + ": need >= 3 rows");
  std::vector<double> values;
  const double x0 = table.rows.front().at(0);
  const double h = table.rows.at(1).at(0) - x0;
  if (!(h > 0.0)) fail(ErrorKind::ConfigError, path.string() + ": abscissae must increase");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() < 2) fail(ErrorKind::ConfigError, path.string() + ": rows need x,value");
    const double expected = x0 + static_cast<double>(i) * h;
    if (std::abs(row[0] - expected) > 1e-6 * h) {
      fail(ErrorKind::ConfigError, path.string() + ": abscissae are not uniformly spaced");
    }
    values.push_back(row[1]);
  }
  return GridFunction(x0, h, std::move(values));
}

CsvTable to_table(const GridFunction& u, const std::string& x_name, const std::string& value_name) {
  CsvTable t{{x_name, value_name}, {}};
  t.rows.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    t.rows.push_back({u.x(i), u.missing(i) ? std::numeric_limits<double>::quiet_NaN() : u[i]});
  }
  return t;
}

}  // namespace subflow
