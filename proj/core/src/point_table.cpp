#include "wildfire/point_table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wildfire/error.hpp"

namespace wildfire {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_field(const std::string& s, int line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::MalformedCsv,
                "line " + std::to_string(line_no) + ": bad numeric field '" + s + "'");
  return v;
}

}  // namespace

void PointTable::validate(int year_min, int year_max) const {
  for (const Row& row : rows) {
    if (!std::isfinite(row.x) || !std::isfinite(row.y))
      throw Error(ErrorCode::MalformedCsv, "non-finite coordinate in point table");
    if (row.year < year_min || row.year > year_max)
      throw Error(ErrorCode::MalformedCsv,
                  "year " + std::to_string(row.year) + " outside study period");
  }
}

PointTable read_point_csv(std::istream& in) {
  PointTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      if (fields.size() < 3 || fields[0] != "x" || fields[1] != "y" ||
          fields[2] != "year")
        throw Error(ErrorCode::MalformedCsv, "header must start with x,y,year");
      table.columns.assign(fields.begin() + 3, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size() + 3)
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(line_no) + ": wrong field count");
    PointTable::Row row;
    row.x = parse_field(fields[0], line_no);
    row.y = parse_field(fields[1], line_no);
    row.year = int(parse_field(fields[2], line_no));
    for (std::size_t i = 3; i < fields.size(); ++i)
      row.values.push_back(parse_field(fields[i], line_no));
    table.rows.push_back(std::move(row));
  }
  if (!have_header)
    throw Error(ErrorCode::MalformedCsv, "missing header row");
  return table;
}

PointTable read_point_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return read_point_csv(in);
}

void write_point_csv(const PointTable& table, std::ostream& out) {
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "x,y,year";
  for (const auto& c : table.columns) out << ',' << c;
  out << "\n";
  for (const auto& row : table.rows) {
    out << fmt(row.x) << ',' << fmt(row.y) << ',' << row.year;
    for (double v : row.values) out << ',' << fmt(v);
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoFailure, "write failed");
}

}  // namespace wildfire
