#include <doctest.h>

#include "wildfire/error.hpp"
#include "wildfire/raster.hpp"
#include "wildfire/rng.hpp"
#include "wildfire/stack.hpp"

using namespace wildfire;

namespace {

GeoTransform frame(double ox, double oy, double size) {
  GeoTransform t;
  t.origin_x = ox;
  t.origin_y = oy;
  t.cell_size = size;
  return t;
}

Grid make_grid(int w, int h, const GeoTransform& t, std::vector<double> values) {
  return Grid(w, h, t, kDefaultNodata, std::move(values));
}

}  // namespace

TEST_CASE("cell_of maps points to containing cells") {
  const GeoTransform t = frame(0, 100, 10);
  CHECK(cell_of(t, 5, 95, 10, 10) == RowCol{0, 0});
  CHECK(cell_of(t, 25, 75, 10, 10) == RowCol{2, 2});
  CHECK_THROWS_AS(cell_of(t, -1, 95, 10, 10), Error);

  // edges: top/left inclusive, bottom/right exclusive
  CHECK(cell_of(t, 0, 100, 10, 10) == RowCol{0, 0});
  CHECK_THROWS_AS(cell_of(t, 100, 50, 10, 10), Error);
  CHECK_THROWS_AS(cell_of(t, 50, 0, 10, 10), Error);
}

TEST_CASE("center_of is the inverse of cell_of") {
  const GeoTransform t = frame(0, 100, 10);
  const XY c00 = center_of(t, 0, 0, 10, 10);
  CHECK(c00.x == doctest::Approx(5.0));
  CHECK(c00.y == doctest::Approx(95.0));
  const XY c22 = center_of(t, 2, 2, 10, 10);
  CHECK(c22.x == doctest::Approx(25.0));
  CHECK(c22.y == doctest::Approx(75.0));
  CHECK_THROWS_AS(center_of(t, -1, 0, 10, 10), Error);
  CHECK_THROWS_AS(center_of(t, 0, 10, 10, 10), Error);
}

TEST_CASE("cell round trip holds for every in-bounds cell") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const GeoTransform t = frame(rng.uniform(-1000, 1000), rng.uniform(-1000, 1000),
                                 rng.uniform(0.5, 50));
    const int w = 1 + int(rng.below(30));
    const int h = 1 + int(rng.below(30));
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const XY center = center_of(t, r, c, w, h);
        CHECK(cell_of(t, center.x, center.y, w, h) == RowCol{r, c});
      }
  }
}

TEST_CASE("grid construction validates shape and geographic extent") {
  CHECK_THROWS_AS(Grid(0, 4, frame(0, 10, 1)), Error);
  CHECK_THROWS_AS(Grid(2, 2, frame(0, 10, -1)), Error);
  CHECK_THROWS_AS(make_grid(2, 2, frame(0, 10, 1), {1, 2, 3}), Error);

  GeoTransform geo = frame(170, 80, 1);
  geo.crs = CrsKind::Geographic;
  CHECK_THROWS_AS(Grid(20, 4, geo, kDefaultNodata), Error);  // crosses 180
  CHECK_NOTHROW(Grid(10, 4, geo, kDefaultNodata));
}

TEST_CASE("align with the identity target copies values and mask") {
  const GeoTransform t = frame(0, 20, 10);
  Grid g = make_grid(2, 2, t, {1, kDefaultNodata, 3, 4});
  const Grid a = align(g, t, 2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(a.at(r, c) == g.at(r, c));
}

TEST_CASE("align 2x upsample duplicates each value into a 2x2 block") {
  const GeoTransform source = frame(0, 20, 10);
  Grid g = make_grid(2, 2, source, {1, 2, 3, 4});
  const GeoTransform target = frame(0, 20, 5);
  const Grid up = align(g, target, 4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(up.at(r, c) == g.at(r / 2, c / 2));
}

TEST_CASE("align marks uncovered cells nodata and rejects disjoint extents") {
  const GeoTransform source = frame(0, 20, 10);
  Grid g = make_grid(2, 2, source, {1, 2, 3, 4});

  const Grid wider = align(g, frame(-10, 20, 10), 4, 2);
  CHECK(wider.is_nodata(0, 0));
  CHECK(wider.at(0, 1) == 1);

  CHECK_THROWS_AS(align(g, frame(100, 20, 10), 2, 2), Error);
}

TEST_CASE("stack validates frames and names") {
  const GeoTransform t = frame(0, 20, 10);
  Grid a = make_grid(2, 2, t, {1, 2, 3, 4});
  Grid b = make_grid(2, 2, t, {5, 6, 7, 8});

  SUBCASE("single static band") {
    auto stack = FeatureStack::make(
        {{"dem", BandData::make_static(a, BandRole::Topographic)}});
    CHECK(stack.size() == 1);
    CHECK(stack.width() == 2);
  }

  SUBCASE("width mismatch rejected") {
    Grid wide = make_grid(3, 2, t, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(FeatureStack::make(
                        {{"a", BandData::make_static(a, BandRole::Topographic)},
                         {"b", BandData::make_static(wide, BandRole::Climatic)}}),
                    Error);
  }

  SUBCASE("duplicate names rejected") {
    CHECK_THROWS_AS(FeatureStack::make(
                        {{"a", BandData::make_static(a, BandRole::Topographic)},
                         {"a", BandData::make_static(b, BandRole::Climatic)}}),
                    Error);
  }

  SUBCASE("dynamic plus static") {
    BandData::YearLayers layers;
    layers.emplace(2015, a);
    layers.emplace(2016, b);
    auto stack = FeatureStack::make(
        {{"ndvi", BandData::make_dynamic(std::move(layers), BandRole::Vegetation,
                                         AggregationPolicy::Mean)},
         {"dem", BandData::make_static(a, BandRole::Topographic)}});
    CHECK(stack.size() == 2);
    CHECK(stack.find("ndvi") != nullptr);
    CHECK(stack.find("missing") == nullptr);
  }

  SUBCASE("dynamic band requires at least one year") {
    CHECK_THROWS_AS(BandData::make_dynamic({}, BandRole::Vegetation,
                                           AggregationPolicy::Mean),
                    Error);
  }
}
