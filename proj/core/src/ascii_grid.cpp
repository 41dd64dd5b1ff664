#include "wildfire/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "wildfire/error.hpp"

namespace wildfire {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& token, ErrorCode code) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw Error(code, "cannot parse numeric token '" + token + "'");
  return value;
}

}  // namespace

Grid read_ascii_grid(std::istream& in, CrsKind crs, double default_nodata) {
  static const char* const kKeys[] = {"ncols", "nrows", "xllcorner",
                                      "yllcorner", "cellsize", "nodata_value"};
  std::map<std::string, double> header;

  // Header lines: key value. The first token that is not a known key
  // starts the data block.
  std::string token;
  while (true) {
    std::streampos before = in.tellg();
    if (!(in >> token)) throw Error(ErrorCode::MalformedHeader, "empty stream");
    const std::string key = lower(token);
    const bool known = std::find_if(std::begin(kKeys), std::end(kKeys),
                                    [&](const char* k) { return key == k; }) !=
                       std::end(kKeys);
    if (!known) {
      in.clear();
      in.seekg(before);
      break;
    }
    if (header.count(key))
      throw Error(ErrorCode::MalformedHeader, "duplicate header key '" + key + "'");
    std::string value;
    if (!(in >> value))
      throw Error(ErrorCode::MalformedHeader, "header key '" + key + "' has no value");
    header[key] = parse_number(value, ErrorCode::MalformedHeader);
  }

  for (const char* required : {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize"})
    if (!header.count(required))
      throw Error(ErrorCode::MalformedHeader,
                  std::string("missing header key '") + required + "'");

  const double ncols_d = header["ncols"];
  const double nrows_d = header["nrows"];
  if (ncols_d < 1 || nrows_d < 1 || ncols_d != std::floor(ncols_d) ||
      nrows_d != std::floor(nrows_d))
    throw Error(ErrorCode::MalformedHeader, "ncols/nrows must be positive integers");
  const int ncols = int(ncols_d);
  const int nrows = int(nrows_d);
  const double cellsize = header["cellsize"];
  if (!(cellsize > 0.0))
    throw Error(ErrorCode::MalformedHeader, "cellsize must be > 0");
  const double nodata = header.count("nodata_value") ? header["nodata_value"]
                                                     : default_nodata;

  GeoTransform t;
  t.origin_x = header["xllcorner"];
  t.origin_y = header["yllcorner"] + nrows * cellsize;
  t.cell_size = cellsize;
  t.crs = crs;

  std::vector<double> values;
  values.reserve(std::size_t(ncols) * nrows);
  while (in >> token) {
    if (std::int64_t(values.size()) >= std::int64_t(ncols) * nrows)
      throw Error(ErrorCode::CellCountMismatch, "more cells than ncols*nrows");
    values.push_back(parse_number(token, ErrorCode::NonNumericToken));
  }
  if (std::int64_t(values.size()) != std::int64_t(ncols) * nrows)
    throw Error(ErrorCode::CellCountMismatch,
                "expected " + std::to_string(std::int64_t(ncols) * nrows) +
                    " cells, got " + std::to_string(values.size()));

  return Grid(ncols, nrows, t, nodata, std::move(values));
}

Grid read_ascii_grid(const std::filesystem::path& path, CrsKind crs,
                     double default_nodata) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return read_ascii_grid(in, crs, default_nodata);
}

void write_ascii_grid(const Grid& g, std::ostream& out) {
  if (g.width() == 0 || g.height() == 0)
    throw Error(ErrorCode::InvalidArgument, "refusing to write an empty grid");

  char buf[64];
  auto fmt6 = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  auto fmt_full = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  const GeoTransform& t = g.transform();
  out << "ncols " << g.width() << "\n";
  out << "nrows " << g.height() << "\n";
  out << "xllcorner " << fmt_full(t.origin_x) << "\n";
  out << "yllcorner " << fmt_full(t.origin_y - g.height() * t.cell_size) << "\n";
  out << "cellsize " << fmt_full(t.cell_size) << "\n";
  out << "NODATA_value " << fmt6(g.nodata()) << "\n";
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      if (c) out << ' ';
      out << fmt6(g.at(r, c));
    }
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoFailure, "write failed");
}

void write_ascii_grid(const Grid& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for write");
  write_ascii_grid(g, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + path.string() + "'");
}

}  // namespace wildfire
