#pragma once

#include <cstdint>
#include <utility>

#include "wildfire/raster.hpp"

namespace wildfire {

struct ImputeReport {
  enum class Method { Knn, Kmeans };

  Method method = Method::Knn;
  std::int64_t filled = 0;
  std::int64_t unfilled = 0;
  // parameters used
  int k = 0;
  int max_radius = 0;
  int clusters = 0;
  std::uint64_t seed = 0;
};

/// Fills each nodata cell with the arithmetic mean of its k nearest valid
/// cells (Euclidean distance in cell units, ties broken by row then
/// column) within max_radius. Cells with no valid neighbor in range stay
/// nodata. Valid cells never change; fills never cascade.
std::pair<Grid, ImputeReport> knn_impute(const Grid& g, int k = 8, int max_radius = 10);

/// Clusters valid cells with Lloyd's algorithm on z-scored
/// (row, col, value) triples (k-means++ start, empty clusters reseeded
/// from the farthest point), then fills each nodata cell with the mean
/// value of the spatially nearest cluster.
std::pair<Grid, ImputeReport> kmeans_impute(const Grid& g, int k_clusters,
                                            std::uint64_t seed, int max_iter = 100,
                                            double tol = 1e-6);

}  // namespace wildfire
