#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wildfire {

enum class CrsKind { Geographic, Planar };

/// Affine frame of a north-up grid: upper-left corner origin, square
/// cells, y decreasing with row index. No rotation/shear terms.
struct GeoTransform {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 1.0;
  CrsKind crs = CrsKind::Planar;

  friend bool operator==(const GeoTransform&, const GeoTransform&) = default;
};

struct RowCol {
  int row = 0;
  int col = 0;
  friend bool operator==(const RowCol&, const RowCol&) = default;
};

struct XY {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr double kDefaultNodata = -9999.0;

/// Single-band grid of doubles with a nodata sentinel. Immutable frame;
/// values may be set during construction-time fills only by owners.
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, const GeoTransform& transform,
       double nodata = kDefaultNodata);
  Grid(int width, int height, const GeoTransform& transform, double nodata,
       std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t cell_count() const { return std::int64_t(width_) * height_; }
  const GeoTransform& transform() const { return transform_; }
  double nodata() const { return nodata_; }

  double at(int row, int col) const { return values_[index(row, col)]; }
  void set(int row, int col, double v) { values_[index(row, col)] = v; }
  bool is_nodata(int row, int col) const { return at(row, col) == nodata_; }
  bool is_nodata_value(double v) const { return v == nodata_; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::int64_t valid_count() const;

  /// True when width, height, transform, and nodata all match.
  bool same_frame(const Grid& other) const;

  /// Extent in map units: [min_x, max_x] x [min_y, max_y].
  double min_x() const { return transform_.origin_x; }
  double max_x() const { return transform_.origin_x + width_ * transform_.cell_size; }
  double max_y() const { return transform_.origin_y; }
  double min_y() const { return transform_.origin_y - height_ * transform_.cell_size; }

 private:
  std::int64_t index(int row, int col) const {
    return std::int64_t(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  GeoTransform transform_{};
  double nodata_ = kDefaultNodata;
  std::vector<double> values_;
};

/// Cell whose footprint contains (x, y). A cell covers
/// x in [left, left+size) and y in (top-size, top].
RowCol cell_of(const GeoTransform& t, double x, double y, int width, int height);

/// Center coordinates of a cell; inverse of cell_of for in-bounds cells.
XY center_of(const GeoTransform& t, int row, int col, int width, int height);

/// Nearest-neighbor resample onto a target frame. Target cells whose
/// center falls outside the source extent become nodata.
Grid align(const Grid& source, const GeoTransform& target, int width, int height);

}  // namespace wildfire
