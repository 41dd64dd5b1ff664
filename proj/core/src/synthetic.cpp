#include "wildfire/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "wildfire/ascii_grid.hpp"
#include "wildfire/distance.hpp"
#include "wildfire/error.hpp"
#include "wildfire/rng.hpp"

namespace wildfire {

namespace {

struct Bump {
  double x, y, amplitude, sigma;
};

/// Smooth random field: a handful of Gaussian bumps plus a tilted plane.
class SmoothField {
 public:
  SmoothField(Rng& rng, double extent_x, double extent_y, int n_bumps,
              double amplitude) {
    for (int i = 0; i < n_bumps; ++i) {
      bumps_.push_back({rng.uniform(0.0, extent_x), rng.uniform(0.0, extent_y),
                        rng.uniform(-amplitude, amplitude),
                        rng.uniform(0.15, 0.45) * std::max(extent_x, extent_y)});
    }
    slope_x_ = rng.uniform(-amplitude, amplitude) / extent_x;
    slope_y_ = rng.uniform(-amplitude, amplitude) / extent_y;
  }

  double at(double x, double y) const {
    double v = slope_x_ * x + slope_y_ * y;
    for (const Bump& b : bumps_) {
      const double dx = x - b.x, dy = y - b.y;
      v += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
    }
    return v;
  }

 private:
  std::vector<Bump> bumps_;
  double slope_x_ = 0.0, slope_y_ = 0.0;
};

Grid field_grid(const SmoothField& field, const GeoTransform& t, int w, int h,
                double offset = 0.0, double scale = 1.0) {
  Grid g(w, h, t, kDefaultNodata);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const XY p = center_of(t, r, c, w, h);
      g.set(r, c, offset + scale * field.at(p.x, p.y));
    }
  return g;
}

void zscore_stats(const Grid& g, double& mean, double& sd) {
  double sum = 0.0;
  std::int64_t n = 0;
  for (double v : g.values())
    if (!g.is_nodata_value(v)) {
      sum += v;
      ++n;
    }
  mean = sum / double(n);
  double ss = 0.0;
  for (double v : g.values())
    if (!g.is_nodata_value(v)) ss += (v - mean) * (v - mean);
  sd = std::sqrt(ss / double(n));
  if (sd == 0.0) sd = 1.0;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

SyntheticLandscape make_synthetic_landscape(const SyntheticSpec& spec) {
  const int w = spec.width, h = spec.height;
  GeoTransform t;
  t.origin_x = 0.0;
  t.origin_y = h * spec.cell_size;
  t.cell_size = spec.cell_size;
  t.crs = CrsKind::Planar;
  const double extent_x = w * spec.cell_size;
  const double extent_y = h * spec.cell_size;

  Rng rng(stage_seed(spec.seed, "landscape"));

  // Terrain and forest cover.
  SmoothField elev_field(rng, extent_x, extent_y, 14, 900.0);
  Grid elev = field_grid(elev_field, t, w, h, 1200.0);
  Grid slope(w, h, t, kDefaultNodata);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const int r1 = std::min(r + 1, h - 1), c1 = std::min(c + 1, w - 1);
      const double dzdx = (elev.at(r, c1) - elev.at(r, c)) / spec.cell_size;
      const double dzdy = (elev.at(r1, c) - elev.at(r, c)) / spec.cell_size;
      slope.set(r, c, std::hypot(dzdx, dzdy) * 1000.0);
    }

  SmoothField forest_field(rng, extent_x, extent_y, 10, 1.0);
  std::vector<double> forest_values;
  forest_values.reserve(std::size_t(w) * h);
  Grid forest(w, h, t, kDefaultNodata);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const XY p = center_of(t, r, c, w, h);
      forest_values.push_back(forest_field.at(p.x, p.y));
    }
  // Threshold at the 40th percentile: ~60% of the domain is forest.
  std::vector<double> sorted_forest(forest_values);
  std::nth_element(sorted_forest.begin(),
                   sorted_forest.begin() + std::ptrdiff_t(sorted_forest.size() * 2 / 5),
                   sorted_forest.end());
  const double forest_cut = sorted_forest[sorted_forest.size() * 2 / 5];
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      forest.set(r, c, forest_values[std::size_t(r) * w + c] > forest_cut ? 1.0 : 0.0);

  // Roads: polylines sweeping across the domain with jitter.
  VectorLayer roads;
  roads.crs = t.crs;
  for (int i = 0; i < 5; ++i) {
    std::vector<XY> line;
    const bool horizontal = (i % 2) == 0;
    const double lane = rng.uniform(0.12, 0.88);
    const int steps = 12;
    for (int s = 0; s <= steps; ++s) {
      const double along = double(s) / steps;
      const double jitter = rng.uniform(-0.05, 0.05);
      const double x = horizontal ? along : lane + jitter;
      const double y = horizontal ? lane + jitter : along;
      line.push_back({x * extent_x, y * extent_y});
    }
    roads.polylines.push_back(std::move(line));
  }

  // Settlements: clustered points.
  VectorLayer settlements;
  settlements.crs = t.crs;
  for (int cluster = 0; cluster < 9; ++cluster) {
    const double cx = rng.uniform(0.1, 0.9) * extent_x;
    const double cy = rng.uniform(0.1, 0.9) * extent_y;
    const int members = 4 + int(rng.below(10));
    for (int m = 0; m < members; ++m)
      settlements.points.push_back({cx + rng.normal() * 0.04 * extent_x,
                                    cy + rng.normal() * 0.04 * extent_y});
  }

  Grid dist_road = euclidean_distance_raster(roads, t, w, h);
  Grid pop_density = density_raster(settlements, t, w, h, 6.0 * spec.cell_size);

  // Dynamic bands: smooth base plus yearly drift; none carry label signal.
  const int n_years = spec.year_end - spec.year_start + 1;
  auto make_dynamic = [&](const char* label, double offset, double scale,
                          double yearly) {
    SmoothField base(rng, extent_x, extent_y, 8, 1.0);
    BandData::YearLayers layers;
    for (int y = 0; y < n_years; ++y) {
      SmoothField drift(rng, extent_x, extent_y, 4, yearly);
      Grid g(w, h, t, kDefaultNodata);
      for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
          const XY p = center_of(t, r, c, w, h);
          g.set(r, c, offset + scale * base.at(p.x, p.y) + drift.at(p.x, p.y));
        }
      layers.emplace(spec.year_start + y, std::move(g));
    }
    (void)label;
    return layers;
  };

  auto ndvi = make_dynamic("ndvi", 0.5, 0.3, 0.1);
  auto temp = make_dynamic("temp", 18.0, 6.0, 1.5);
  auto precip = make_dynamic("precip", 300.0, 150.0, 40.0);
  auto soil = make_dynamic("soil", 0.25, 0.12, 0.04);

  // Punch nodata holes into the soil band (clouds); scattered cells plus
  // a few blobs, small enough for the default KNN impute radius.
  Rng hole_rng(stage_seed(spec.seed, "holes"));
  for (auto& [year, grid] : soil) {
    (void)year;
    const std::int64_t n_holes =
        std::int64_t(spec.nodata_fraction * double(w) * double(h));
    for (std::int64_t i = 0; i < n_holes; ++i) {
      const int r = int(hole_rng.below(std::uint64_t(h)));
      const int c = int(hole_rng.below(std::uint64_t(w)));
      grid.set(r, c, grid.nodata());
    }
    for (int blob = 0; blob < 3; ++blob) {
      const int r0 = int(hole_rng.below(std::uint64_t(h - 4)));
      const int c0 = int(hole_rng.below(std::uint64_t(w - 4)));
      for (int dr = 0; dr < 3; ++dr)
        for (int dc = 0; dc < 3; ++dc) grid.set(r0 + dr, c0 + dc, grid.nodata());
    }
  }

  // Ground truth: logistic in standardized elevation, road distance and
  // population density.
  double m_elev, s_elev, m_road, s_road, m_pop, s_pop;
  zscore_stats(elev, m_elev, s_elev);
  zscore_stats(dist_road, m_road, s_road);
  zscore_stats(pop_density, m_pop, s_pop);
  auto true_logit = [&](int r, int c) {
    const double z1 = (elev.at(r, c) - m_elev) / s_elev;
    const double z2 = (dist_road.at(r, c) - m_road) / s_road;
    const double z3 = (pop_density.at(r, c) - m_pop) / s_pop;
    return 2.0 * z1 - 2.2 * z2 + 1.6 * z3;
  };

  // Calibrate the intercept so the expected class-9 count per year over
  // forest cells matches fires_per_year.
  double lo = -20.0, hi = 5.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double b0 = 0.5 * (lo + hi);
    double expected = 0.0;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        if (forest.at(r, c) == 1.0) expected += sigmoid(b0 + true_logit(r, c));
    (expected > spec.fires_per_year ? hi : lo) = b0;
  }
  const double b0 = 0.5 * (lo + hi);

  SyntheticLandscape land;

  land.true_probability = Grid(w, h, t, kDefaultNodata);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      land.true_probability.set(r, c, sigmoid(b0 + true_logit(r, c)));

  // Fire masks: class 9 where the noisy Bernoulli fires, occasional lower
  // confidence classes elsewhere.
  Rng fire_rng(stage_seed(spec.seed, "fires"));
  for (int y = spec.year_start; y <= spec.year_end; ++y) {
    Grid mask(w, h, t, kDefaultNodata);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const double p = sigmoid(b0 + true_logit(r, c) +
                                 spec.logit_noise * fire_rng.normal());
        const double u = fire_rng.uniform01();
        if (u < p)
          mask.set(r, c, 9.0);
        else if (u < p * 1.5)
          mask.set(r, c, 1.0 + double(fire_rng.below(8)));
      }
    land.fire.years.emplace(y, std::move(mask));
  }

  std::vector<FeatureStack::NamedBand> bands;
  bands.emplace_back("elev",
                     BandData::make_static(std::move(elev), BandRole::Topographic));
  bands.emplace_back("slope",
                     BandData::make_static(std::move(slope), BandRole::Topographic));
  bands.emplace_back("dist_road", BandData::make_static(std::move(dist_road),
                                                        BandRole::Anthropogenic));
  bands.emplace_back("pop_density", BandData::make_static(std::move(pop_density),
                                                          BandRole::Anthropogenic));
  bands.emplace_back("ndvi", BandData::make_dynamic(std::move(ndvi),
                                                    BandRole::Vegetation,
                                                    AggregationPolicy::Mean));
  bands.emplace_back("temp", BandData::make_dynamic(std::move(temp),
                                                    BandRole::Climatic,
                                                    AggregationPolicy::Mean));
  bands.emplace_back("precip", BandData::make_dynamic(std::move(precip),
                                                      BandRole::Climatic,
                                                      AggregationPolicy::Mean));
  bands.emplace_back("soil", BandData::make_dynamic(std::move(soil),
                                                    BandRole::Climatic,
                                                    AggregationPolicy::Median));
  land.stack = FeatureStack::make(std::move(bands));
  land.forest = std::move(forest);
  land.roads = std::move(roads);
  land.settlements = std::move(settlements);
  return land;
}

void write_synthetic_fixture(const SyntheticLandscape& land,
                             const std::filesystem::path& dir, int scenario,
                             std::uint64_t pipeline_seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  auto write_grid = [&](const Grid& g, const std::string& name) {
    write_ascii_grid(g, dir / name);
  };

  std::vector<int> years;
  for (const auto& [year, grid] : land.fire.years) {
    (void)grid;
    years.push_back(year);
  }

  for (const auto& [name, band] : land.stack.bands()) {
    if (name == "dist_road" || name == "pop_density") continue;  // derived
    if (band.is_static()) {
      write_grid(band.static_grid(), name + ".asc");
    } else {
      for (const auto& [year, grid] : band.years())
        write_grid(grid, name + "_" + std::to_string(year) + ".asc");
    }
  }
  for (const auto& [year, grid] : land.fire.years)
    write_grid(grid, "fire_" + std::to_string(year) + ".asc");
  write_grid(land.forest, "forest.asc");

  {
    std::ofstream out(dir / "roads.geojson");
    write_vector_geojson(land.roads, out);
  }
  {
    std::ofstream out(dir / "settlements.geojson");
    write_vector_geojson(land.settlements, out);
  }

  auto year_list = [&]() {
    std::string s = "[";
    for (std::size_t i = 0; i < years.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(years[i]);
    }
    return s + "]";
  };
  auto train_list = [&]() {
    std::string s = "[";
    bool first = true;
    for (int y : years) {
      if (y == years.back()) continue;  // last year is the test year
      if (!first) s += ", ";
      s += std::to_string(y);
      first = false;
    }
    return s + "]";
  };

  std::ofstream cfg(dir / "config.toml");
  cfg << "[project]\n";
  cfg << "seed = " << pipeline_seed << "\n";
  cfg << "out_dir = \"out\"\n\n";
  cfg << "[grids]\n";
  cfg << "crs = \"planar\"\n\n";
  cfg << "[fire]\n";
  cfg << "pattern = \"fire_{year}.asc\"\n";
  cfg << "years = " << year_list() << "\n";
  cfg << "min_class = 9\n\n";
  cfg << "[forest]\n";
  cfg << "mask = \"forest.asc\"\n\n";

  auto band_header = [&](const std::string& name, const char* role) {
    cfg << "[[band]]\n";
    cfg << "name = \"" << name << "\"\n";
    cfg << "role = \"" << role << "\"\n";
  };
  band_header("elev", "topographic");
  cfg << "kind = \"static\"\npath = \"elev.asc\"\n\n";
  band_header("slope", "topographic");
  cfg << "kind = \"static\"\npath = \"slope.asc\"\n\n";
  for (const char* name : {"ndvi", "temp", "precip", "soil"}) {
    band_header(name, name[0] == 'n' ? "vegetation" : "climatic");
    cfg << "kind = \"dynamic\"\n";
    cfg << "pattern = \"" << name << "_{year}.asc\"\n";
    cfg << "years = " << year_list() << "\n";
    cfg << "aggregation = \"" << (std::string(name) == "soil" ? "median" : "mean")
        << "\"\n";
    if (std::string(name) == "soil") cfg << "impute = \"knn\"\n";
    cfg << "\n";
  }
  cfg << "[[derive]]\n";
  cfg << "name = \"dist_road\"\n";
  cfg << "kind = \"distance\"\n";
  cfg << "vector = \"roads.geojson\"\n";
  cfg << "role = \"anthropogenic\"\n\n";
  cfg << "[[derive]]\n";
  cfg << "name = \"pop_density\"\n";
  cfg << "kind = \"density\"\n";
  cfg << "vector = \"settlements.geojson\"\n";
  cfg << "radius = " << 6.0 * land.stack.transform().cell_size << "\n";
  cfg << "role = \"anthropogenic\"\n\n";
  cfg << "[sampling]\n";
  cfg << "scenario = " << scenario << "\n";
  cfg << "train_years = " << train_list() << "\n";
  cfg << "test_years = [" << years.back() << "]\n";
  cfg << "buffer_km = " << (scenario == 2 ? 25.0 : 0.0) << "\n";
  cfg << "ratio = 1.0\n";
  cfg << "year_mode = \"anomaly\"\n\n";
  cfg << "[analysis]\n";
  cfg << "nmi_bins = 16\n\n";
  cfg << "[models]\n";
  cfg << "run = [\"rf\", \"gbt\", \"xgb\", \"knn\"]\n\n";
  cfg << "[map]\n";
  cfg << "year = " << years.back() << "\n";
  cfg << "classes = 5\n";
  cfg << "method = \"quantile\"\n";
  if (!cfg) throw Error(ErrorCode::IoFailure, "cannot write fixture config");
}

}  // namespace wildfire
