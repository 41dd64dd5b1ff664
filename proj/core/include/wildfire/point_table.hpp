#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wildfire {

/// Row-oriented point records: location, year, and named value columns.
struct PointTable {
  struct Row {
    double x = 0.0;
    double y = 0.0;
    int year = 0;
    std::vector<double> values;
  };

  std::vector<std::string> columns;  // names of Row::values entries
  std::vector<Row> rows;

  /// Checks coordinates are finite and years fall inside [year_min, year_max].
  void validate(int year_min, int year_max) const;
};

/// CSV with header `x,y,year,<columns...>`; '.' decimal separator; lines
/// starting with '#' are skipped.
PointTable read_point_csv(std::istream& in);
PointTable read_point_csv(const std::filesystem::path& path);

void write_point_csv(const PointTable& table, std::ostream& out);

}  // namespace wildfire
