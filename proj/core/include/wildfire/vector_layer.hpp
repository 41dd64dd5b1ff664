#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "wildfire/raster.hpp"

namespace wildfire {

/// Point and polyline geometries from a vector source (roads, power
/// lines, settlements).
struct VectorLayer {
  std::vector<XY> points;
  std::vector<std::vector<XY>> polylines;  // each has >= 2 vertices
  CrsKind crs = CrsKind::Planar;

  bool empty() const { return points.empty() && polylines.empty(); }
  std::size_t geometry_count() const { return points.size() + polylines.size(); }
};

/// Parses a GeoJSON FeatureCollection restricted to Point, LineString and
/// MultiLineString geometries. Properties are ignored; any other geometry
/// type is rejected.
VectorLayer read_vector_geojson(std::istream& in, CrsKind crs = CrsKind::Planar);
VectorLayer read_vector_geojson(const std::filesystem::path& path,
                                CrsKind crs = CrsKind::Planar);

void write_vector_geojson(const VectorLayer& layer, std::ostream& out);

}  // namespace wildfire
