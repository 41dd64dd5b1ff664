#pragma once

#include <cstdint>
#include <filesystem>

#include "wildfire/sampling.hpp"
#include "wildfire/stack.hpp"
#include "wildfire/vector_layer.hpp"

namespace wildfire {

/// Parameters of the bundled synthetic landscape: an 8-band stack whose
/// ground-truth fire probability is a logistic function of elevation,
/// road distance and population density plus noise.
struct SyntheticSpec {
  int width = 200;
  int height = 200;
  double cell_size = 12500.0;  // meters; 25 km buffer = 2 cells
  std::uint64_t seed = 20150101;
  int year_start = 2015;
  int year_end = 2022;
  double fires_per_year = 260.0;  // expected class-9 cells per year
  double logit_noise = 0.3;
  double nodata_fraction = 0.01;  // holes punched into the soil band
};

struct SyntheticLandscape {
  FeatureStack stack;   // elev, slope, dist_road, pop_density + 4 dynamic bands
  FireMask fire;        // per-year confidence classes
  Grid forest;          // 1 = forest, 0 = open
  Grid true_probability;  // per-cell ground truth p(fire in a year)
  VectorLayer roads;
  VectorLayer settlements;
};

SyntheticLandscape make_synthetic_landscape(const SyntheticSpec& spec = {});

/// Writes the landscape as pipeline inputs (.asc grids, GeoJSON vectors)
/// plus a ready-to-run config.toml for the given scenario.
void write_synthetic_fixture(const SyntheticLandscape& land,
                             const std::filesystem::path& dir, int scenario,
                             std::uint64_t pipeline_seed);

}  // namespace wildfire
