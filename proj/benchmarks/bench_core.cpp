#include <benchmark/benchmark.h>

#include "wildfire/distance.hpp"
#include "wildfire/feature_analysis.hpp"
#include "wildfire/impute.hpp"
#include "wildfire/models/model.hpp"
#include "wildfire/riskmap.hpp"
#include "wildfire/rng.hpp"

using namespace wildfire;

namespace {

SampleSet training_data(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  SampleSet s;
  for (int j = 0; j < p; ++j) s.feature_names.push_back("f" + std::to_string(j));
  for (int i = 0; i < n; ++i) {
    LabeledSample sample;
    double signal = 0.0;
    for (int j = 0; j < p; ++j) {
      sample.features.push_back(rng.normal());
      if (j < 3) signal += sample.features.back();
    }
    sample.label = signal + 0.5 * rng.normal() > 0 ? 1 : 0;
    s.samples.push_back(std::move(sample));
  }
  return s;
}

GeoTransform frame(int h, double cell) {
  GeoTransform t;
  t.origin_y = h * cell;
  t.cell_size = cell;
  return t;
}

}  // namespace

static void BM_TrainDecisionTree(benchmark::State& state) {
  const SampleSet data = training_data(int(state.range(0)), 8, 1);
  for (auto _ : state) {
    Model m = train_decision_tree(data);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_TrainDecisionTree)->Arg(500)->Arg(2000);

static void BM_TrainGbt(benchmark::State& state) {
  const SampleSet data = training_data(1000, 8, 2);
  GbtHyperparams hp;
  hp.n_estimators = int(state.range(0));
  for (auto _ : state) {
    Model m = train_gbt(data, hp, 3);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_TrainGbt)->Arg(25)->Arg(100);

static void BM_TrainRandomForest(benchmark::State& state) {
  const SampleSet data = training_data(1000, 8, 4);
  RfHyperparams hp;
  hp.n_estimators = int(state.range(0));
  for (auto _ : state) {
    Model m = train_random_forest(data, hp, 5);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_TrainRandomForest)->Arg(20)->Arg(100);

static void BM_DistanceRaster(benchmark::State& state) {
  Rng rng(6);
  const int n = int(state.range(0));
  VectorLayer layer;
  for (int i = 0; i < 400; ++i)
    layer.points.push_back({rng.uniform(0, n * 10.0), rng.uniform(0, n * 10.0)});
  const GeoTransform t = frame(n, 10);
  for (auto _ : state) {
    Grid g = euclidean_distance_raster(layer, t, n, n);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_DistanceRaster)->Arg(128)->Arg(256);

static void BM_KnnImpute(benchmark::State& state) {
  Rng rng(7);
  const int n = int(state.range(0));
  Grid g(n, n, frame(n, 10));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (rng.uniform01() >= 0.05) g.set(r, c, rng.uniform(0, 100));
  for (auto _ : state) {
    auto out = knn_impute(g, 8, 10);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_KnnImpute)->Arg(128)->Arg(256);

static void BM_MutualInformation(benchmark::State& state) {
  Rng rng(8);
  const int bins = int(state.range(0));
  std::vector<double> counts(std::size_t(bins) * bins);
  for (double& c : counts) c = double(rng.below(50));
  const auto h = JointHistogram::from_counts(bins, bins, std::move(counts));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mutual_information(h));
  }
}
BENCHMARK(BM_MutualInformation)->Arg(16)->Arg(64);

static void BM_PredictGrid(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(9);
  const GeoTransform t = frame(n, 10);
  std::vector<FeatureStack::NamedBand> bands;
  for (int j = 0; j < 8; ++j) {
    Grid g(n, n, t);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g.set(r, c, rng.normal());
    bands.emplace_back("f" + std::to_string(j),
                       BandData::make_static(std::move(g), BandRole::Climatic));
  }
  const FeatureStack stack = FeatureStack::make(std::move(bands));
  RfHyperparams hp;
  hp.n_estimators = 50;
  const Model model = train_random_forest(training_data(1000, 8, 10), hp, 11);
  for (auto _ : state) {
    Grid g = predict_grid(model, stack);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_PredictGrid)->Arg(128);

BENCHMARK_MAIN();
