#pragma once

#include "wildfire/raster.hpp"
#include "wildfire/vector_layer.hpp"

namespace wildfire {

/// Mean Earth radius in meters used for all spherical distances.
inline constexpr double kEarthRadiusM = 6371008.8;

/// Great-circle distance in meters (spherical law of cosines) between
/// two lon/lat points in degrees.
double great_circle_m(double lon1, double lat1, double lon2, double lat2);

/// Distance between two points in a frame's metric: map units for planar
/// frames, meters for geographic ones.
double point_distance(const XY& a, const XY& b, CrsKind crs);

double point_segment_distance(const XY& p, const XY& a, const XY& b, CrsKind crs);

/// Distance from a point to the nearest geometry of the layer.
double layer_distance(const VectorLayer& layer, const XY& p);

/// Per-cell distance from the cell center to the nearest geometry.
/// Planar frames report map units, geographic frames meters.
/// `use_index` switches on a uniform spatial index over point geometries;
/// results are identical either way.
Grid euclidean_distance_raster(const VectorLayer& layer, const GeoTransform& frame,
                               int width, int height, bool use_index = true);

/// Per-cell count of layer points within `radius` of the cell center,
/// divided by the disc area pi*radius^2.
Grid density_raster(const VectorLayer& points, const GeoTransform& frame,
                    int width, int height, double radius);

}  // namespace wildfire
