#include "wildfire/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wildfire/error.hpp"
#include "wildfire/parallel.hpp"

namespace wildfire {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double clamp1(double v) { return std::min(1.0, std::max(-1.0, v)); }

/// Angular distance in radians on the unit sphere.
double angular_distance(double lon1, double lat1, double lon2, double lat2) {
  const double p1 = lat1 * kDegToRad, p2 = lat2 * kDegToRad;
  const double dl = (lon2 - lon1) * kDegToRad;
  return std::acos(clamp1(std::sin(p1) * std::sin(p2) +
                          std::cos(p1) * std::cos(p2) * std::cos(dl)));
}

double bearing_rad(double lon1, double lat1, double lon2, double lat2) {
  const double p1 = lat1 * kDegToRad, p2 = lat2 * kDegToRad;
  const double dl = (lon2 - lon1) * kDegToRad;
  const double y = std::sin(dl) * std::cos(p2);
  const double x = std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl);
  return std::atan2(y, x);
}

double planar_segment_distance(const XY& p, const XY& a, const XY& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double wx = p.x - a.x, wy = p.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? (wx * vx + wy * vy) / len2 : 0.0;
  t = std::min(1.0, std::max(0.0, t));
  const double dx = p.x - (a.x + t * vx);
  const double dy = p.y - (a.y + t * vy);
  return std::hypot(dx, dy);
}

/// Cross-track distance with endpoint clamping; inputs in degrees.
double geographic_segment_distance(const XY& p, const XY& a, const XY& b) {
  const double dap = angular_distance(a.x, a.y, p.x, p.y);
  const double dbp = angular_distance(b.x, b.y, p.x, p.y);
  const double dab = angular_distance(a.x, a.y, b.x, b.y);
  if (dab == 0.0) return dap * kEarthRadiusM;

  const double theta_ap = bearing_rad(a.x, a.y, p.x, p.y);
  const double theta_ab = bearing_rad(a.x, a.y, b.x, b.y);
  if (std::cos(theta_ap - theta_ab) < 0.0) return dap * kEarthRadiusM;

  const double dxt = std::asin(clamp1(std::sin(dap) * std::sin(theta_ap - theta_ab)));
  const double dat = std::acos(clamp1(std::cos(dap) / std::max(1e-300, std::cos(dxt))));
  if (dat > dab) return dbp * kEarthRadiusM;
  return std::fabs(dxt) * kEarthRadiusM;
}

/// Uniform bucket index over point geometries; planar frames only.
class PointBucketIndex {
 public:
  PointBucketIndex(const std::vector<XY>& points, double cell)
      : cell_(cell) {
    min_x_ = std::numeric_limits<double>::infinity();
    min_y_ = std::numeric_limits<double>::infinity();
    double max_x = -min_x_, max_y = -min_y_;
    for (const XY& p : points) {
      min_x_ = std::min(min_x_, p.x);
      min_y_ = std::min(min_y_, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
    nx_ = std::max(1, int((max_x - min_x_) / cell_) + 1);
    ny_ = std::max(1, int((max_y - min_y_) / cell_) + 1);
    buckets_.resize(std::size_t(nx_) * ny_);
    for (std::size_t i = 0; i < points.size(); ++i)
      buckets_[bucket_of(points[i])].push_back(i);
    points_ = &points;
  }

  /// Exact nearest distance: expands bucket rings until the ring's lower
  /// bound exceeds the best distance found, so no candidate nearer than
  /// the reported minimum is ever skipped.
  double nearest(const XY& p) const {
    const auto& pts = *points_;
    const int bx = std::clamp(int((p.x - min_x_) / cell_), 0, nx_ - 1);
    const int by = std::clamp(int((p.y - min_y_) / cell_), 0, ny_ - 1);
    double best = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
      if (ring > 0) {
        const double lower = (ring - 1) * cell_;
        if (lower > best) break;
      }
      for (int gy = by - ring; gy <= by + ring; ++gy) {
        if (gy < 0 || gy >= ny_) continue;
        for (int gx = bx - ring; gx <= bx + ring; ++gx) {
          if (gx < 0 || gx >= nx_) continue;
          if (std::max(std::abs(gx - bx), std::abs(gy - by)) != ring) continue;
          for (std::size_t i : buckets_[std::size_t(gy) * nx_ + gx]) {
            best = std::min(best, std::hypot(p.x - pts[i].x, p.y - pts[i].y));
          }
        }
      }
    }
    return best;
  }

 private:
  std::size_t bucket_of(const XY& p) const {
    const int gx = std::clamp(int((p.x - min_x_) / cell_), 0, nx_ - 1);
    const int gy = std::clamp(int((p.y - min_y_) / cell_), 0, ny_ - 1);
    return std::size_t(gy) * nx_ + gx;
  }

  const std::vector<XY>* points_ = nullptr;
  double cell_ = 1.0;
  double min_x_ = 0.0, min_y_ = 0.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

double great_circle_m(double lon1, double lat1, double lon2, double lat2) {
  return angular_distance(lon1, lat1, lon2, lat2) * kEarthRadiusM;
}

double point_distance(const XY& a, const XY& b, CrsKind crs) {
  if (crs == CrsKind::Geographic) return great_circle_m(a.x, a.y, b.x, b.y);
  return std::hypot(a.x - b.x, a.y - b.y);
}

double point_segment_distance(const XY& p, const XY& a, const XY& b, CrsKind crs) {
  if (crs == CrsKind::Geographic) return geographic_segment_distance(p, a, b);
  return planar_segment_distance(p, a, b);
}

double layer_distance(const VectorLayer& layer, const XY& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const XY& q : layer.points)
    best = std::min(best, point_distance(p, q, layer.crs));
  for (const auto& line : layer.polylines)
    for (std::size_t i = 0; i + 1 < line.size(); ++i)
      best = std::min(best, point_segment_distance(p, line[i], line[i + 1], layer.crs));
  return best;
}

Grid euclidean_distance_raster(const VectorLayer& layer, const GeoTransform& frame,
                               int width, int height, bool use_index) {
  if (layer.empty())
    throw Error(ErrorCode::EmptyLayer, "distance raster needs at least one geometry");

  Grid out(width, height, frame, kDefaultNodata);

  // The bucket index only covers planar point sets; polylines and
  // geographic layers take the exhaustive path. Both paths agree exactly.
  const bool indexed = use_index && frame.crs == CrsKind::Planar &&
                       layer.polylines.empty() && layer.points.size() > 16;
  if (indexed) {
    PointBucketIndex index(layer.points, frame.cell_size * 4.0);
    parallel_for(0, height, [&](std::int64_t r) {
      for (int c = 0; c < width; ++c) {
        const XY p = center_of(frame, int(r), c, width, height);
        out.set(int(r), c, index.nearest(p));
      }
    });
    return out;
  }

  parallel_for(0, height, [&](std::int64_t r) {
    for (int c = 0; c < width; ++c) {
      const XY p = center_of(frame, int(r), c, width, height);
      out.set(int(r), c, layer_distance(layer, p));
    }
  });
  return out;
}

Grid density_raster(const VectorLayer& points, const GeoTransform& frame,
                    int width, int height, double radius) {
  if (!points.polylines.empty())
    throw Error(ErrorCode::NonPointGeometry, "density raster accepts points only");
  if (!(radius > 0.0))
    throw Error(ErrorCode::NonPositiveRadius, "radius must be > 0");

  const double area = std::numbers::pi * radius * radius;
  Grid out(width, height, frame, kDefaultNodata);
  parallel_for(0, height, [&](std::int64_t r) {
    for (int c = 0; c < width; ++c) {
      const XY p = center_of(frame, int(r), c, width, height);
      std::int64_t count = 0;
      for (const XY& q : points.points)
        if (point_distance(p, q, points.crs) <= radius) ++count;
      out.set(int(r), c, double(count) / area);
    }
  });
  return out;
}

}  // namespace wildfire
