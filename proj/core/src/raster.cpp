#include "wildfire/raster.hpp"

#include <cmath>

#include "wildfire/error.hpp"

namespace wildfire {

namespace {

void validate_frame(int width, int height, const GeoTransform& t) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  if (!(t.cell_size > 0.0))
    throw Error(ErrorCode::InvalidArgument, "cell_size must be > 0");
  if (t.crs == CrsKind::Geographic) {
    const double min_x = t.origin_x;
    const double max_x = t.origin_x + width * t.cell_size;
    const double max_y = t.origin_y;
    const double min_y = t.origin_y - height * t.cell_size;
    if (min_x < -180.0 - 1e-9 || max_x > 180.0 + 1e-9 || max_y > 90.0 + 1e-9 ||
        min_y < -90.0 - 1e-9)
      throw Error(ErrorCode::InvalidArgument,
                  "geographic extent outside [-180,180]x[-90,90]");
  }
}

}  // namespace

Grid::Grid(int width, int height, const GeoTransform& transform, double nodata)
    : Grid(width, height, transform, nodata,
           std::vector<double>(std::size_t(width) * std::size_t(height > 0 ? height : 0),
                               nodata)) {}

Grid::Grid(int width, int height, const GeoTransform& transform, double nodata,
           std::vector<double> values)
    : width_(width), height_(height), transform_(transform), nodata_(nodata),
      values_(std::move(values)) {
  validate_frame(width_, height_, transform_);
  if (std::int64_t(values_.size()) != cell_count())
    throw Error(ErrorCode::DimensionMismatch,
                "value count does not equal width*height");
}

std::int64_t Grid::valid_count() const {
  std::int64_t n = 0;
  for (double v : values_)
    if (v != nodata_) ++n;
  return n;
}

bool Grid::same_frame(const Grid& other) const {
  return width_ == other.width_ && height_ == other.height_ &&
         transform_ == other.transform_ && nodata_ == other.nodata_;
}

RowCol cell_of(const GeoTransform& t, double x, double y, int width, int height) {
  const double fc = std::floor((x - t.origin_x) / t.cell_size);
  const double fr = std::floor((t.origin_y - y) / t.cell_size);
  if (fc < 0.0 || fr < 0.0 || fc >= double(width) || fr >= double(height))
    throw Error(ErrorCode::OutOfBounds, "point outside grid extent");
  return RowCol{int(fr), int(fc)};
}

XY center_of(const GeoTransform& t, int row, int col, int width, int height) {
  if (row < 0 || col < 0 || row >= height || col >= width)
    throw Error(ErrorCode::OutOfBounds, "cell outside grid");
  return XY{t.origin_x + (col + 0.5) * t.cell_size,
            t.origin_y - (row + 0.5) * t.cell_size};
}

Grid align(const Grid& source, const GeoTransform& target, int width, int height) {
  validate_frame(width, height, target);
  if (source.transform().crs != target.crs)
    throw Error(ErrorCode::FrameMismatch, "align requires matching crs kinds");

  const double tmin_x = target.origin_x;
  const double tmax_x = target.origin_x + width * target.cell_size;
  const double tmax_y = target.origin_y;
  const double tmin_y = target.origin_y - height * target.cell_size;
  const bool overlap = tmin_x < source.max_x() && tmax_x > source.min_x() &&
                       tmin_y < source.max_y() && tmax_y > source.min_y();
  if (!overlap) throw Error(ErrorCode::NoOverlap, "extents do not overlap");

  Grid out(width, height, target, source.nodata());
  const GeoTransform& st = source.transform();
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const XY p = center_of(target, r, c, width, height);
      const double fc = std::floor((p.x - st.origin_x) / st.cell_size);
      const double fr = std::floor((st.origin_y - p.y) / st.cell_size);
      if (fc < 0.0 || fr < 0.0 || fc >= double(source.width()) ||
          fr >= double(source.height()))
        continue;  // no source coverage -> stays nodata
      out.set(r, c, source.at(int(fr), int(fc)));
    }
  }
  return out;
}

}  // namespace wildfire
