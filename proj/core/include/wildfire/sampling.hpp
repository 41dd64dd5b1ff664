#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "wildfire/sample_set.hpp"
#include "wildfire/stack.hpp"

namespace wildfire {

/// Per-year confidence-class grids (classes 1..9, 9 = highest).
struct FireMask {
  std::map<int, Grid> years;

  /// Rejects non-nodata values outside 1..9 and frame mismatches.
  void validate() const;
};

struct FirePoint {
  double x = 0.0;
  double y = 0.0;
  int year = 0;
};

/// Cell centers of every cell with class >= min_class, per year.
std::vector<FirePoint> extract_fire_points(const FireMask& mask, int min_class = 9);

/// Uniform draw without replacement over (cell, year) pairs from cells
/// where candidate_mask == 1, excluding same-year fire cells. With
/// unique_across_years a cell is used at most once over all years.
std::vector<FirePoint> sample_nonfire(const Grid& candidate_mask,
                                      const std::vector<FirePoint>& fire_points,
                                      std::span<const int> years, std::int64_t n,
                                      std::uint64_t seed, bool unique_across_years);

struct SplitSpec {
  std::set<int> train_years{2015, 2016, 2017, 2018, 2019, 2020, 2021};
  std::set<int> test_years{2022};
  double buffer_km = 0.0;  // 25 for the buffered scenario
};

struct ScenarioOptions {
  double ratio = 1.0;  // non-fire samples per fire sample
  bool unique_across_years = true;
};

struct ScenarioSplit {
  SampleSet train;
  SampleSet test;
};

/// Builds labeled train/test point sets for one of the three sampling
/// scenarios. Scenarios 1 and 2 restrict both classes to forest cells;
/// scenario 2 additionally discards every test sample lying within
/// buffer_km of any training sample. Scenario 3 uses the whole grid.
ScenarioSplit build_scenario(int scenario, const FireMask& fire_mask,
                             const Grid& forest_mask, const SplitSpec& split,
                             std::uint64_t seed, const ScenarioOptions& options = {});

enum class YearMode { AggregatedStatic, PerYearAnomaly };

struct AttachOptions {
  YearMode mode = YearMode::AggregatedStatic;
};

/// Reads each band at every sample's cell. Static bands read as-is.
/// Dynamic bands read their temporal aggregate (AggregatedStatic) or the
/// sample-year anomaly (PerYearAnomaly). Samples hitting any nodata (or
/// falling off the grid) are dropped and counted in provenance.
SampleSet attach_features(const SampleSet& points, const FeatureStack& stack,
                          const AttachOptions& options = {});

/// Shuffled partition into k folds with sizes differing by at most one.
std::vector<std::vector<std::int64_t>> kfold(std::int64_t n, int k,
                                             std::uint64_t seed);

/// Smallest distance between any train/test pair, in the buffer metric
/// (meters for geographic frames, map units for planar ones).
double min_train_test_distance(const SampleSet& train, const SampleSet& test,
                               CrsKind crs);

}  // namespace wildfire
