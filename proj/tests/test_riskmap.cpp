#include <algorithm>
#include <doctest.h>

#include "wildfire/error.hpp"
#include "wildfire/riskmap.hpp"
#include "wildfire/rng.hpp"

using namespace wildfire;

namespace {

GeoTransform planar(double cell, int h) {
  GeoTransform t;
  t.origin_y = h * cell;
  t.cell_size = cell;
  return t;
}

Grid grid_of(int w, int h, const std::vector<double>& values) {
  return Grid(w, h, planar(10, h), kDefaultNodata, std::vector<double>(values));
}

}  // namespace

TEST_CASE("quantile breaks on the uniform 100-cell fixture") {
  std::vector<double> values;
  for (int i = 0; i < 100; ++i) values.push_back(0.005 + 0.01 * i);
  const Grid prob = grid_of(10, 10, values);
  const RiskClassification risk = classify_risk(prob, 5);

  REQUIRE(risk.breaks.size() == 4);
  const double expected[] = {0.2, 0.4, 0.6, 0.8};
  for (int b = 0; b < 4; ++b)
    CHECK(std::abs(risk.breaks[std::size_t(b)] - expected[b]) < 0.01);

  const auto hist = class_histogram(risk.classes, 5);
  for (std::int64_t count : hist) CHECK(count == 20);
}

TEST_CASE("constant probability grid collapses to class 1") {
  const Grid prob = grid_of(3, 2, {0.4, 0.4, 0.4, 0.4, 0.4, 0.4});
  const RiskClassification risk = classify_risk(prob, 5);
  for (double v : risk.classes.values()) CHECK(v == 1.0);
  for (double b : risk.breaks) CHECK(b == 0.4);
}

TEST_CASE("nodata probability cells stay nodata in the class grid") {
  std::vector<double> values{0.1, 0.2, kDefaultNodata, 0.4, 0.5, 0.6};
  const Grid prob = grid_of(3, 2, values);
  const RiskClassification risk = classify_risk(prob, 5);
  CHECK(risk.classes.is_nodata(0, 2));
  CHECK(risk.classes.at(0, 0) == 1.0);
}

TEST_CASE("classification is monotone in probability") {
  Rng rng(9);
  std::vector<double> values;
  for (int i = 0; i < 144; ++i) values.push_back(rng.uniform01());
  const Grid prob = grid_of(12, 12, values);
  const RiskClassification risk = classify_risk(prob, 5);

  std::vector<std::pair<double, double>> pairs;  // (prob, class)
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      pairs.emplace_back(prob.at(r, c), risk.classes.at(r, c));
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i)
    CHECK(pairs[i].second >= pairs[i - 1].second);
}

TEST_CASE("quantile classes are invariant under increasing transforms") {
  Rng rng(19);
  std::vector<double> values, transformed;
  for (int i = 0; i < 200; ++i) {
    const double v = rng.uniform01();
    values.push_back(v);
    transformed.push_back(v * v * v);  // strictly increasing on [0,1]
  }
  const RiskClassification a = classify_risk(grid_of(20, 10, values), 5);
  const RiskClassification b = classify_risk(grid_of(20, 10, transformed), 5);
  for (std::size_t i = 0; i < a.classes.values().size(); ++i)
    CHECK(a.classes.values()[i] == b.classes.values()[i]);
}

TEST_CASE("jenks separates obvious clusters") {
  const Grid prob = grid_of(5, 1, {0.10, 0.11, 0.12, 0.90, 0.91});
  const RiskClassification risk = classify_risk(prob, 2, BreakMethod::Jenks);
  CHECK(risk.classes.at(0, 0) == 1.0);
  CHECK(risk.classes.at(0, 2) == 1.0);
  CHECK(risk.classes.at(0, 3) == 2.0);
  CHECK(risk.classes.at(0, 4) == 2.0);
}

TEST_CASE("too few valid cells is an error") {
  const Grid prob = grid_of(2, 1, {0.5, kDefaultNodata});
  CHECK_THROWS_AS(classify_risk(prob, 5), Error);
}

TEST_CASE("ppm rendering: header, palette lookup, nodata white") {
  const Palette palette = Palette::blue_to_red();

  SUBCASE("uniform class-1 grid renders blue") {
    const Grid classes = grid_of(2, 1, {1, 1});
    const std::string ppm = render_ppm(classes, palette);
    CHECK(ppm.rfind("P6\n2 1\n255\n", 0) == 0);
    const std::size_t base = ppm.size() - 6;
    CHECK(std::uint8_t(ppm[base + 0]) == 0);
    CHECK(std::uint8_t(ppm[base + 1]) == 0);
    CHECK(std::uint8_t(ppm[base + 2]) == 255);
  }

  SUBCASE("2x2 grid classes [1,5,5,1] -> blue,red,red,blue") {
    const Grid classes = grid_of(2, 2, {1, 5, 5, 1});
    const std::string ppm = render_ppm(classes, palette);
    const std::size_t base = ppm.size() - 12;
    const std::uint8_t expected[12] = {0, 0, 255, 255, 0, 0,
                                       255, 0, 0, 0, 0, 255};
    for (int i = 0; i < 12; ++i) CHECK(std::uint8_t(ppm[base + i]) == expected[i]);
  }

  SUBCASE("nodata renders white") {
    const Grid classes = grid_of(2, 1, {1, kDefaultNodata});
    const std::string ppm = render_ppm(classes, palette);
    const std::size_t base = ppm.size() - 3;
    CHECK(std::uint8_t(ppm[base]) == 255);
    CHECK(std::uint8_t(ppm[base + 1]) == 255);
    CHECK(std::uint8_t(ppm[base + 2]) == 255);
  }

  SUBCASE("class values outside the palette are rejected") {
    const Grid classes = grid_of(1, 1, {6});
    CHECK_THROWS_AS(render_ppm(classes, palette), Error);
  }
}

TEST_CASE("png rendering produces a valid signature and dimensions") {
  const Grid classes = grid_of(3, 2, {1, 2, 3, 4, 5, kDefaultNodata});
  const auto png = render_png(classes, Palette::blue_to_red());
  REQUIRE(png.size() > 33);
  const std::uint8_t signature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  for (int i = 0; i < 8; ++i) CHECK(png[std::size_t(i)] == signature[i]);
  // IHDR width/height are big-endian at offsets 16 and 20
  CHECK(png[19] == 3);
  CHECK(png[23] == 2);
}

namespace {

SampleSet tiny_training_set() {
  SampleSet s;
  s.feature_names = {"a", "b"};
  for (int i = 0; i < 20; ++i) {
    LabeledSample sample;
    sample.label = i % 2;
    sample.features = {double(i % 2) * 4.0 + 0.1 * i, double(i)};
    s.samples.push_back(std::move(sample));
  }
  return s;
}

}  // namespace

TEST_CASE("predict_grid matches per-cell predict_proba and propagates nodata") {
  const GeoTransform t = planar(10, 3);
  Grid a(4, 3, t);
  Grid b(4, 3, t);
  Rng rng(33);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) {
      a.set(r, c, rng.uniform(0, 5));
      b.set(r, c, rng.uniform(0, 20));
    }
  a.set(1, 2, a.nodata());  // hole in one band

  auto stack = FeatureStack::make(
      {{"a", BandData::make_static(a, BandRole::Topographic)},
       {"b", BandData::make_static(b, BandRole::Climatic)}});
  const Model model = train_decision_tree(tiny_training_set());
  const Grid prob = predict_grid(model, stack);

  CHECK(prob.is_nodata(1, 2));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) {
      if (r == 1 && c == 2) continue;
      const std::vector<double> q{a.at(r, c), b.at(r, c)};
      CHECK(prob.at(r, c) == model.predict_proba(q));
    }
}

TEST_CASE("predict_grid on a constant stack yields a constant grid") {
  const GeoTransform t = planar(10, 2);
  Grid a(2, 2, t);
  Grid b(2, 2, t);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      a.set(r, c, 1.0);
      b.set(r, c, 2.0);
    }
  auto stack = FeatureStack::make(
      {{"a", BandData::make_static(a, BandRole::Topographic)},
       {"b", BandData::make_static(b, BandRole::Climatic)}});
  const Model model = train_decision_tree(tiny_training_set());
  const Grid prob = predict_grid(model, stack);
  const double expected = model.predict_proba(std::vector<double>{1.0, 2.0});
  for (double v : prob.values()) CHECK(v == expected);
}

TEST_CASE("predict_grid rejects stacks missing a model feature") {
  const GeoTransform t = planar(10, 2);
  Grid a(2, 2, t);
  auto stack = FeatureStack::make(
      {{"a", BandData::make_static(a, BandRole::Topographic)}});
  const Model model = train_decision_tree(tiny_training_set());
  CHECK_THROWS_AS(predict_grid(model, stack), Error);
}
