#include <algorithm>
#include <doctest.h>

#include "wildfire/error.hpp"
#include "wildfire/impute.hpp"
#include "wildfire/rng.hpp"

using namespace wildfire;

namespace {

GeoTransform frame(int h) {
  GeoTransform t;
  t.origin_y = h;
  t.cell_size = 1;
  return t;
}

Grid grid_of(int w, int h, const std::vector<double>& values) {
  return Grid(w, h, frame(h), kDefaultNodata, std::vector<double>(values));
}

}  // namespace

TEST_CASE("knn fill: hole surrounded by equal values") {
  std::vector<double> v(9, 7.5);
  v[4] = kDefaultNodata;
  auto [filled, report] = knn_impute(grid_of(3, 3, v), 8, 2);
  CHECK(filled.at(1, 1) == 7.5);
  CHECK(report.filled == 1);
  CHECK(report.unfilled == 0);
}

TEST_CASE("knn fill: mean of the available neighbors") {
  auto [filled, report] = knn_impute(grid_of(3, 1, {1, kDefaultNodata, 3}), 2, 1);
  CHECK(filled.at(0, 1) == 2.0);
  CHECK(report.filled == 1);
}

TEST_CASE("knn fill: fewer than k neighbors still fill; none stays nodata") {
  auto [filled, report] = knn_impute(grid_of(4, 1, {1, kDefaultNodata, kDefaultNodata,
                                                    kDefaultNodata}),
                                     4, 1);
  CHECK(filled.at(0, 1) == 1.0);       // one in-radius neighbor
  CHECK(filled.is_nodata(0, 2));       // all neighbors nodata
  CHECK(filled.is_nodata(0, 3));
  CHECK(report.filled == 1);
  CHECK(report.unfilled == 2);
  CHECK(report.filled + report.unfilled == 3);
}

TEST_CASE("knn fill reads only the original grid (no cascading)") {
  // If fills cascaded, the second hole would pick up the first fill.
  auto [filled, report] = knn_impute(grid_of(5, 1, {8, kDefaultNodata, kDefaultNodata,
                                                    kDefaultNodata, 2}),
                                     1, 1);
  CHECK(filled.at(0, 1) == 8.0);
  CHECK(filled.is_nodata(0, 2));
  CHECK(filled.at(0, 3) == 2.0);
  CHECK(report.unfilled == 1);
}

TEST_CASE("knn parameter validation") {
  CHECK_THROWS_AS(knn_impute(grid_of(1, 1, {1}), 0, 5), Error);
  CHECK_THROWS_AS(knn_impute(grid_of(1, 1, {1}), 3, 0), Error);
}

TEST_CASE("kmeans fill: uniform grid hole gets the uniform value") {
  std::vector<double> v(16, 3.25);
  v[5] = kDefaultNodata;
  for (int k : {1, 2, 4}) {
    auto [filled, report] = kmeans_impute(grid_of(4, 4, v), k, 123);
    CHECK(filled.at(1, 1) == doctest::Approx(3.25).epsilon(1e-12));
    CHECK(report.filled == 1);
  }
}

TEST_CASE("kmeans fill: two blobs, hole inside the high blob") {
  // left half 0, right half 10, hole in the right half
  std::vector<double> v;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) v.push_back(c < 3 ? 0.0 : 10.0);
  const int hole = 2 * 6 + 4;
  v[std::size_t(hole)] = kDefaultNodata;

  auto [filled, report] = kmeans_impute(grid_of(6, 6, v), 2, 9);
  CHECK(filled.at(2, 4) == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(report.filled == 1);
}

TEST_CASE("kmeans with k=1 fills with the global mean") {
  std::vector<double> v{1, 2, 3, 4, 5, kDefaultNodata};
  auto [filled, report] = kmeans_impute(grid_of(3, 2, v), 1, 77);
  CHECK(filled.at(1, 2) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("imputation is the identity on hole-free grids") {
  Rng rng(31);
  std::vector<double> v;
  for (int i = 0; i < 36; ++i) v.push_back(rng.uniform(-5, 5));
  const Grid g = grid_of(6, 6, v);
  auto [knn_out, knn_report] = knn_impute(g, 8, 10);
  auto [km_out, km_report] = kmeans_impute(g, 4, 55);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      CHECK(knn_out.at(r, c) == g.at(r, c));
      CHECK(km_out.at(r, c) == g.at(r, c));
    }
  CHECK(knn_report.filled == 0);
  CHECK(km_report.unfilled == 0);
}

TEST_CASE("fill values stay within the valid min/max") {
  Rng rng(41);
  std::vector<double> v;
  for (int i = 0; i < 100; ++i)
    v.push_back(rng.uniform01() < 0.2 ? kDefaultNodata : rng.uniform(-3, 9));
  const Grid g = grid_of(10, 10, v);
  double lo = 1e300, hi = -1e300;
  for (double x : g.values())
    if (!g.is_nodata_value(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  auto [knn_out, r1] = knn_impute(g, 4, 3);
  auto [km_out, r2] = kmeans_impute(g, 3, 5);
  for (const Grid* out : {&knn_out, &km_out})
    for (double x : out->values())
      if (!out->is_nodata_value(x)) {
        CHECK(x >= lo);
        CHECK(x <= hi);
      }
}

TEST_CASE("fixed seed reproduces kmeans output bit for bit") {
  Rng rng(17);
  std::vector<double> v;
  for (int i = 0; i < 64; ++i)
    v.push_back(rng.uniform01() < 0.25 ? kDefaultNodata : rng.uniform(0, 50));
  const Grid g = grid_of(8, 8, v);
  auto [a, ra] = kmeans_impute(g, 5, 2024);
  auto [b, rb] = kmeans_impute(g, 5, 2024);
  for (int i = 0; i < 64; ++i) CHECK(a.values()[i] == b.values()[i]);
  CHECK(ra.filled == rb.filled);
}

TEST_CASE("kmeans needs at least k valid cells") {
  std::vector<double> v{1, kDefaultNodata, kDefaultNodata, kDefaultNodata};
  CHECK_THROWS_AS(kmeans_impute(grid_of(2, 2, v), 2, 1), Error);
}
