#include <set>
#include <sstream>

#include <doctest.h>

#include "wildfire/error.hpp"
#include "wildfire/sampling.hpp"
#include "wildfire/temporal.hpp"

using namespace wildfire;

namespace {

GeoTransform planar(double cell, int h) {
  GeoTransform t;
  t.origin_y = h * cell;
  t.cell_size = cell;
  return t;
}

Grid constant_grid(int w, int h, const GeoTransform& t, double v) {
  Grid g(w, h, t, kDefaultNodata);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) g.set(r, c, v);
  return g;
}

std::set<std::pair<std::int64_t, int>> cell_year_set(const SampleSet& s,
                                                     const Grid& frame) {
  std::set<std::pair<std::int64_t, int>> out;
  for (const auto& sample : s.samples) {
    const RowCol rc = cell_of(frame.transform(), sample.x, sample.y,
                              frame.width(), frame.height());
    out.emplace(std::int64_t(rc.row) * frame.width() + rc.col, sample.year);
  }
  return out;
}

}  // namespace

TEST_CASE("extract_fire_points keeps only cells at or above min_class") {
  const GeoTransform t = planar(10, 2);
  FireMask mask;
  Grid g(3, 2, t);
  g.set(0, 0, 9);
  g.set(0, 1, 8);  // below min_class
  g.set(1, 2, 9);
  mask.years.emplace(2019, g);

  const auto points = extract_fire_points(mask, 9);
  REQUIRE(points.size() == 2);
  CHECK(points[0].year == 2019);
  CHECK(points[0].x == 5);
  CHECK(points[0].y == 15);

  SUBCASE("all cells class 9 in one year -> every center returned") {
    FireMask full;
    full.years.emplace(2020, constant_grid(3, 2, t, 9));
    CHECK(extract_fire_points(full, 9).size() == 6);
  }

  SUBCASE("all-nodata mask -> empty") {
    FireMask empty;
    empty.years.emplace(2020, Grid(3, 2, t));
    CHECK(extract_fire_points(empty, 9).empty());
  }
}

TEST_CASE("fire mask validation rejects out-of-range classes") {
  const GeoTransform t = planar(10, 1);
  FireMask mask;
  Grid g(1, 1, t);
  g.set(0, 0, 11);
  mask.years.emplace(2020, g);
  CHECK_THROWS_AS(mask.validate(), Error);
}

TEST_CASE("sample_nonfire draws eligible (cell, year) pairs") {
  const GeoTransform t = planar(10, 2);
  const Grid eligible = constant_grid(2, 2, t, 1.0);
  const std::vector<int> years{2018};

  SUBCASE("n equal to eligible count returns all eligible cells") {
    const auto draw = sample_nonfire(eligible, {}, years, 4, 1, false);
    CHECK(draw.size() == 4);
    std::set<std::pair<double, double>> unique;
    for (const auto& p : draw) unique.emplace(p.x, p.y);
    CHECK(unique.size() == 4);
  }

  SUBCASE("fire cells of the same year are excluded") {
    std::vector<FirePoint> fire{{5, 15, 2018}};
    const auto draw = sample_nonfire(eligible, fire, years, 3, 1, false);
    CHECK(draw.size() == 3);
    for (const auto& p : draw) CHECK((p.x != 5 || p.y != 15));
    CHECK_THROWS_AS(sample_nonfire(eligible, fire, years, 4, 1, false), Error);
  }

  SUBCASE("unique_across_years caps a 1-cell grid at one sample") {
    const Grid one = constant_grid(1, 1, t, 1.0);
    std::vector<int> many_years{2015, 2016, 2017, 2018, 2019, 2020, 2021};
    CHECK(sample_nonfire(one, {}, many_years, 1, 7, true).size() == 1);
    CHECK_THROWS_AS(sample_nonfire(one, {}, many_years, 2, 7, true), Error);
    CHECK(sample_nonfire(one, {}, many_years, 2, 7, false).size() == 2);
  }

  SUBCASE("fixed seed reproduces the draw") {
    const auto a = sample_nonfire(eligible, {}, years, 2, 99, false);
    const auto b = sample_nonfire(eligible, {}, years, 2, 99, false);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].y == b[i].y);
      CHECK(a[i].year == b[i].year);
    }
  }
}

namespace {

/// Small synthetic world: fires along the top rows, forest in the west.
struct World {
  GeoTransform t = planar(15000, 20);  // 15 km cells
  FireMask fire;
  Grid forest{Grid(20, 20, planar(15000, 20), kDefaultNodata)};

  explicit World(int fire_rows = 2) {
    forest = constant_grid(20, 20, t, 0.0);
    for (int r = 0; r < 20; ++r)
      for (int c = 0; c < 12; ++c) forest.set(r, c, 1.0);
    for (int year : {2020, 2021, 2022}) {
      Grid g(20, 20, t);
      for (int r = 0; r < fire_rows; ++r)
        for (int c = r; c < 20; c += 3) g.set(r, c, 9.0);
      fire.years.emplace(year, std::move(g));
    }
  }
};

}  // namespace

TEST_CASE("build_scenario: forest restriction and class balance") {
  World world;
  SplitSpec split;
  split.train_years = {2020, 2021};
  split.test_years = {2022};

  const ScenarioSplit s1 = build_scenario(1, world.fire, world.forest, split, 31);
  CHECK(s1.train.count_label(1) == s1.train.count_label(0));
  CHECK(s1.test.count_label(1) == s1.test.count_label(0));
  for (const SampleSet* set : {&s1.train, &s1.test})
    for (const auto& sample : set->samples) {
      const RowCol rc = cell_of(world.t, sample.x, sample.y, 20, 20);
      CHECK(world.forest.at(rc.row, rc.col) == 1.0);
    }

  const ScenarioSplit s3 = build_scenario(3, world.fire, world.forest, split, 31);
  bool outside_forest = false;
  for (const auto& sample : s3.train.samples) {
    const RowCol rc = cell_of(world.t, sample.x, sample.y, 20, 20);
    if (world.forest.at(rc.row, rc.col) == 0.0) outside_forest = true;
  }
  CHECK(outside_forest);  // scenario 3 ignores the forest mask
}

TEST_CASE("build_scenario: no (cell, year) is both fire and non-fire") {
  World world;
  SplitSpec split;
  split.train_years = {2020, 2021};
  split.test_years = {2022};
  for (int scenario : {1, 3}) {
    const ScenarioSplit s = build_scenario(scenario, world.fire, world.forest,
                                           split, 47);
    for (const SampleSet* set : {&s.train, &s.test}) {
      std::set<std::pair<std::int64_t, int>> fire_cells, nonfire_cells;
      for (const auto& sample : set->samples) {
        const RowCol rc = cell_of(world.t, sample.x, sample.y, 20, 20);
        auto key = std::make_pair(std::int64_t(rc.row) * 20 + rc.col, sample.year);
        (sample.label == 1 ? fire_cells : nonfire_cells).insert(key);
      }
      for (const auto& key : nonfire_cells) CHECK(fire_cells.count(key) == 0);
    }
  }
}

TEST_CASE("scenario 2 discards test samples inside the buffer") {
  World world;
  SplitSpec split;
  split.train_years = {2020, 2021};
  split.test_years = {2022};
  split.buffer_km = 25.0;

  const ScenarioSplit s2 = build_scenario(2, world.fire, world.forest, split, 53);
  CHECK_FALSE(s2.test.samples.empty());
  CHECK(s2.test.provenance.buffer_discarded > 0);

  // post-hoc audit: every surviving pair is at least 25 km apart
  const double min_distance =
      min_train_test_distance(s2.train, s2.test, CrsKind::Planar);
  CHECK(min_distance >= 25.0 * 1000.0);
}

TEST_CASE("scenario 2 keeps far points and drops near ones") {
  // one train fire; candidate test points 10 km and 30 km away
  const GeoTransform t = planar(10000, 8);
  FireMask fire;
  Grid g_train(8, 8, t);
  g_train.set(4, 0, 9.0);  // train fire
  Grid g_test(8, 8, t);
  g_test.set(4, 1, 9.0);  // 10 km east of the train fire
  g_test.set(4, 3, 9.0);  // 30 km east
  fire.years.emplace(2021, std::move(g_train));
  fire.years.emplace(2022, std::move(g_test));
  const Grid forest = constant_grid(8, 8, t, 1.0);

  SplitSpec split;
  split.train_years = {2021};
  split.test_years = {2022};
  split.buffer_km = 25.0;
  const ScenarioSplit s = build_scenario(2, fire, forest, split, 11);

  bool has_near = false, has_far = false;
  for (const auto& sample : s.test.samples) {
    if (sample.label != 1) continue;
    const RowCol rc = cell_of(t, sample.x, sample.y, 8, 8);
    if (rc.col == 1) has_near = true;
    if (rc.col == 3) has_far = true;
  }
  CHECK_FALSE(has_near);
  CHECK(has_far);
}

TEST_CASE("build_scenario is deterministic under a fixed seed") {
  World world;
  SplitSpec split;
  split.train_years = {2020, 2021};
  split.test_years = {2022};
  const ScenarioSplit a = build_scenario(1, world.fire, world.forest, split, 777);
  const ScenarioSplit b = build_scenario(1, world.fire, world.forest, split, 777);
  CHECK(cell_year_set(a.train, world.forest) == cell_year_set(b.train, world.forest));
  CHECK(cell_year_set(a.test, world.forest) == cell_year_set(b.test, world.forest));
}

TEST_CASE("attach_features reads cell values and drops nodata hits") {
  const GeoTransform t = planar(10, 2);
  Grid dem(2, 2, t);
  dem.set(0, 0, 100);
  dem.set(0, 1, 200);
  dem.set(1, 1, 400);  // (1,0) stays nodata

  BandData::YearLayers layers;
  for (int year : {2020, 2021, 2022}) {
    Grid g(2, 2, t);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) g.set(r, c, double(10 * (year - 2019)));
    layers.emplace(year, std::move(g));
  }
  auto stack = FeatureStack::make(
      {{"dem", BandData::make_static(dem, BandRole::Topographic)},
       {"temp", BandData::make_dynamic(std::move(layers), BandRole::Climatic,
                                       AggregationPolicy::Mean)}});

  SampleSet points;
  points.samples.push_back({5, 15, 2021, 0, 1, {}});   // cell (0,0)
  points.samples.push_back({15, 15, 2021, 0, 0, {}});  // cell (0,1)
  points.samples.push_back({5, 5, 2021, 0, 0, {}});    // cell (1,0): nodata dem
  points.samples.push_back({500, 5, 2021, 0, 0, {}});  // outside the grid

  SUBCASE("aggregated mode reads the temporal mean") {
    AttachOptions options;
    options.mode = YearMode::AggregatedStatic;
    const SampleSet out = attach_features(points, stack, options);
    REQUIRE(out.size() == 2);
    CHECK(out.feature_names == std::vector<std::string>{"dem", "temp"});
    CHECK(out.samples[0].features[0] == 100);
    CHECK(out.samples[0].features[1] == 20);  // mean of 10,20,30
    CHECK(out.provenance.dropped_nodata == 2);
  }

  SUBCASE("anomaly mode composes with the temporal anomaly") {
    AttachOptions options;
    options.mode = YearMode::PerYearAnomaly;
    const SampleSet out = attach_features(points, stack, options);
    REQUIRE(out.size() == 2);
    // year 2021 value 20, temporal mean 20 -> anomaly 0
    CHECK(out.samples[0].features[1] == 0.0);
  }
}

TEST_CASE("kfold partitions indices into balanced shuffled folds") {
  const auto folds = kfold(10, 5, 42);
  REQUIRE(folds.size() == 5);
  std::set<std::int64_t> all;
  for (const auto& fold : folds) {
    CHECK(fold.size() == 2);
    for (std::int64_t i : fold) CHECK(all.insert(i).second);  // disjoint
  }
  CHECK(all.size() == 10);
  CHECK(*all.begin() == 0);
  CHECK(*all.rbegin() == 9);

  const auto again = kfold(10, 5, 42);
  CHECK(folds == again);

  const auto uneven = kfold(11, 5, 1);
  std::size_t total = 0;
  for (const auto& fold : uneven) {
    total += fold.size();
    CHECK(fold.size() >= 2);
    CHECK(fold.size() <= 3);
  }
  CHECK(total == 11);

  CHECK_THROWS_AS(kfold(3, 5, 0), Error);
}

TEST_CASE("sample CSV round trips with provenance comment") {
  SampleSet s;
  s.feature_names = {"dem", "temp"};
  s.samples.push_back({1.5, 2.5, 2020, 0, 1, {100.0, 0.25}});
  s.samples.push_back({3.5, 4.5, 2022, 0, 0, {200.0, -0.5}});

  std::ostringstream out;
  write_sample_csv(s, out, "config_hash=abc123");
  CHECK(out.str().rfind("# config_hash=abc123", 0) == 0);

  std::istringstream in(out.str());
  const SampleSet back = read_sample_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back.feature_names == s.feature_names);
  CHECK(back.samples[0].features[1] == 0.25);
  CHECK(back.samples[1].label == 0);

  SampleSet monthly = s;
  monthly.samples[0].month = 7;
  std::ostringstream out2;
  write_sample_csv(monthly, out2);
  std::istringstream in2(out2.str());
  CHECK(read_sample_csv(in2).samples[0].month == 7);
}
