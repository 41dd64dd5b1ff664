// Acceptance suite: runs every criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failed
// criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wildfire/ascii_grid.hpp"
#include "wildfire/error.hpp"
#include "wildfire/evaluation.hpp"
#include "wildfire/feature_analysis.hpp"
#include "wildfire/impute.hpp"
#include "wildfire/models/model.hpp"
#include "wildfire/pipeline.hpp"
#include "wildfire/riskmap.hpp"
#include "wildfire/rng.hpp"
#include "wildfire/sampling.hpp"
#include "wildfire/synthetic.hpp"

namespace fs = std::filesystem;
using namespace wildfire;

namespace {

struct Check {
  int failures = 0;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures;
    if (first_failure.empty()) first_failure = what;
  }
};

// ---------------------------------------------------------------------------
// 1. mutual information vs brute-force double sum

double mi_bruteforce(const JointHistogram& h) {
  double n = 0.0;
  for (double c : h.counts) n += c;
  double mi = 0.0;
  for (int x = 0; x < h.bins_x; ++x)
    for (int y = 0; y < h.bins_y; ++y) {
      const double c = h.count(x, y);
      if (c <= 0.0) continue;
      double row = 0.0, col = 0.0;
      for (int j = 0; j < h.bins_y; ++j) row += h.count(x, j);
      for (int i = 0; i < h.bins_x; ++i) col += h.count(i, y);
      mi += (c / n) * std::log((c / n) / ((row / n) * (col / n)));
    }
  return mi;
}

void criterion_mi(Check& check) {
  Rng rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const int bx = 1 + int(rng.below(6));
    const int by = 1 + int(rng.below(6));
    std::vector<double> counts(static_cast<std::size_t>(bx) * by);
    double total = 0.0;
    for (double& c : counts) {
      c = double(rng.below(7));  // rational (integer) entries
      total += c;
    }
    if (total == 0.0) counts[0] = 1.0;
    const auto h = JointHistogram::from_counts(bx, by, std::move(counts));
    check.require(std::abs(mutual_information(h) - mi_bruteforce(h)) <= 1e-12,
                  "MI differs from the brute-force sum");
  }

  // MI(X,X) = H(X)
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + int(rng.below(5));
    std::vector<double> marginal(static_cast<std::size_t>(k));
    for (double& c : marginal) c = 1.0 + double(rng.below(9));
    std::vector<double> diag(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
      diag[std::size_t(i) * k + i] = marginal[std::size_t(i)];
    const auto h = JointHistogram::from_counts(k, k, std::move(diag));
    check.require(std::abs(mutual_information(h) - entropy_nats(marginal)) <= 1e-12,
                  "MI(X,X) != H(X)");
  }

  // independence -> MI <= 1e-12 (product-form integer tables)
  for (int trial = 0; trial < 100; ++trial) {
    const int bx = 1 + int(rng.below(6));
    const int by = 1 + int(rng.below(6));
    std::vector<double> row(static_cast<std::size_t>(bx)), col(static_cast<std::size_t>(by));
    for (double& v : row) v = 1.0 + double(rng.below(4));
    for (double& v : col) v = 1.0 + double(rng.below(4));
    std::vector<double> counts(static_cast<std::size_t>(bx) * by);
    for (int x = 0; x < bx; ++x)
      for (int y = 0; y < by; ++y)
        counts[std::size_t(x) * by + y] = row[std::size_t(x)] * col[std::size_t(y)];
    const auto h = JointHistogram::from_counts(bx, by, std::move(counts));
    check.require(mutual_information(h) <= 1e-12, "independent joint has MI > 1e-12");
  }
}

// ---------------------------------------------------------------------------
// 2. VIF vs an independent Gauss-Jordan OLS oracle

double vif_oracle(const std::vector<std::vector<double>>& columns, std::size_t j) {
  const std::size_t n = columns.front().size();
  const std::size_t p = columns.size();  // response + (p-1) regressors + intercept
  // design matrix: intercept + all columns except j
  std::vector<std::vector<double>> x;
  x.push_back(std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < p; ++i)
    if (i != j) x.push_back(columns[i]);
  const std::vector<double>& y = columns[j];
  const std::size_t m = x.size();

  // normal equations solved by Gauss-Jordan with partial pivoting
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t i = 0; i < n; ++i) a[r][c] += x[r][i] * x[c][i];
    for (std::size_t i = 0; i < n; ++i) a[r][m] += x[r][i] * y[i];
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    const double d = a[col][col];
    for (std::size_t c = col; c <= m; ++c) a[col][c] /= d;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= double(n);
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t r = 0; r < m; ++r) pred += a[r][m] * x[r][i];
    sse += (y[i] - pred) * (y[i] - pred);
    sst += (y[i] - mean_y) * (y[i] - mean_y);
  }
  const double r2 = 1.0 - sse / sst;
  if (r2 >= 1.0 - 1e-6) return 1e6;
  return 1.0 / (1.0 - r2);
}

SampleSet columns_to_samples(const std::vector<std::vector<double>>& columns) {
  SampleSet s;
  for (std::size_t j = 0; j < columns.size(); ++j)
    s.feature_names.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < columns.front().size(); ++i) {
    LabeledSample sample;
    for (const auto& col : columns) sample.features.push_back(col[i]);
    s.samples.push_back(std::move(sample));
  }
  return s;
}

void criterion_vif(Check& check) {
  Rng rng(202);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::vector<double>> columns(5, std::vector<double>(20));
    for (auto& col : columns)
      for (double& v : col) v = rng.normal();
    // moderate collinearity in half the fixtures
    if (trial % 2 == 0)
      for (int i = 0; i < 20; ++i)
        columns[4][std::size_t(i)] =
            0.7 * columns[0][std::size_t(i)] + 0.5 * columns[1][std::size_t(i)] +
            0.3 * rng.normal();
    const FeatureScores scores = vif_scores(columns_to_samples(columns));
    for (std::size_t j = 0; j < 5; ++j) {
      const double expected = vif_oracle(columns, j);
      const double got = scores.scores[j];
      check.require(std::abs(got - expected) <= 1e-6 * std::max(1.0, expected),
                    "VIF differs from the OLS oracle");
    }
  }

  // orthogonal Walsh design -> VIF 1 +- 1e-9
  const int n = 16;
  auto walsh = [&](int mask) {
    std::vector<double> col;
    for (int i = 0; i < n; ++i)
      col.push_back(__builtin_popcount(unsigned(i) & unsigned(mask)) % 2 == 0 ? 1.0
                                                                              : -1.0);
    return col;
  };
  const FeatureScores ortho = vif_scores(columns_to_samples(
      {walsh(1), walsh(2), walsh(3), walsh(4), walsh(8)}));
  for (double v : ortho.scores)
    check.require(std::abs(v - 1.0) <= 1e-9, "orthogonal VIF not 1");

  // exact duplicate -> cap
  const FeatureScores dup =
      vif_scores(columns_to_samples({walsh(1), walsh(1), walsh(2)}));
  check.require(dup.scores[0] == 1e6 && dup.scores[1] == 1e6,
                "duplicated feature does not hit the 1e6 cap");
}

// ---------------------------------------------------------------------------
// 3. AUC vs Mann-Whitney

double auc_mann_whitney(const std::vector<int>& labels,
                        const std::vector<double>& scores) {
  double wins = 0.0, ties = 0.0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        ties += 1.0;
    }
  }
  return (wins + 0.5 * ties) / double(pairs);
}

void criterion_auc(Check& check) {
  Rng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + int(rng.below(49));
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<double> scores(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      labels[std::size_t(i)] = int(rng.below(2));
      scores[std::size_t(i)] = double(rng.below(10)) / 10.0;  // ties on purpose
    }
    labels[0] = 0;
    labels[std::size_t(n - 1)] = 1;
    const double auc = roc_auc(labels, scores).auc;
    check.require(std::abs(auc - auc_mann_whitney(labels, scores)) <= 1e-12,
                  "trapezoid AUC differs from Mann-Whitney");
  }
  const double fixture =
      roc_auc(std::vector<int>{0, 0, 1, 1}, std::vector<double>{0.1, 0.4, 0.35, 0.8})
          .auc;
  check.require(fixture == 0.75, "reference fixture AUC is not exactly 0.75");
}

// ---------------------------------------------------------------------------
// 4. weighted recall == accuracy

void criterion_metric_identity(Check& check) {
  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + int(rng.below(60));
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<double> probs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      labels[std::size_t(i)] = int(rng.below(2));
      probs[std::size_t(i)] = rng.uniform01();
    }
    const MetricsReport r = metrics(labels, probs);
    check.require(r.recall == r.accuracy, "weighted recall != accuracy");
  }
}

// ---------------------------------------------------------------------------
// 5. model reductions

SampleSet blob_data(int n_per_class, std::uint64_t seed) {
  Rng rng(seed);
  SampleSet s;
  s.feature_names = {"a", "b"};
  for (int i = 0; i < n_per_class; ++i) {
    for (int label : {0, 1}) {
      LabeledSample sample;
      sample.label = label;
      sample.features = {label * 8.0 + rng.normal(), label * 8.0 + rng.normal()};
      s.samples.push_back(std::move(sample));
    }
  }
  return s;
}

void criterion_reductions(Check& check) {
  // RF(1 tree, no bootstrap, mtry=p) == DT
  const SampleSet data = blob_data(40, 7);
  RfHyperparams rf_hp;
  rf_hp.n_estimators = 1;
  rf_hp.bootstrap = false;
  rf_hp.mtry = 2;
  const Model rf = train_random_forest(data, rf_hp, 5);
  const Model dt = train_decision_tree(data);
  Rng rng(505);
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> q{rng.uniform(-5, 13), rng.uniform(-5, 13)};
    check.require(rf.predict_proba(q) == dt.predict_proba(q),
                  "RF(1,no-bootstrap,mtry=p) != DT");
  }

  // XGB(subsample=1, colsample=1, lambda=0) tree structure == GBT's
  SampleSet fixture;
  fixture.feature_names = {"x"};
  for (int i = 0; i < 4; ++i) {
    LabeledSample s;
    s.label = i >= 2 ? 1 : 0;
    s.features = {double(i + 1)};
    fixture.samples.push_back(std::move(s));
  }
  XgbHyperparams xgb_hp;
  xgb_hp.n_estimators = 10;
  xgb_hp.subsample = 1.0;
  xgb_hp.colsample_bytree = 1.0;
  xgb_hp.lambda = 0.0;
  GbtHyperparams gbt_hp;
  gbt_hp.n_estimators = 10;
  const Model xgb = train_xgb(fixture, xgb_hp, 3);
  const Model gbt = train_gbt(fixture, gbt_hp, 3);
  const auto& xt = std::get<BoostedModel>(xgb.payload()).trees;
  const auto& gt = std::get<BoostedModel>(gbt.payload()).trees;
  check.require(xt.size() == gt.size(), "tree counts differ");
  for (std::size_t t = 0; t < xt.size() && t < gt.size(); ++t) {
    check.require(xt[t].nodes.size() == gt[t].nodes.size(), "node counts differ");
    for (std::size_t n = 0; n < xt[t].nodes.size() && n < gt[t].nodes.size(); ++n) {
      check.require(xt[t].nodes[n].feature == gt[t].nodes[n].feature &&
                        xt[t].nodes[n].threshold == gt[t].nodes[n].threshold &&
                        xt[t].nodes[n].left == gt[t].nodes[n].left &&
                        xt[t].nodes[n].right == gt[t].nodes[n].right,
                    "XGB/GBT tree structure mismatch");
    }
  }

  // negative gradients vs finite differences of the logistic loss
  auto loss = [](double y, double f) {
    const double p = 1.0 / (1.0 + std::exp(-f));
    return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  };
  const double h = 1e-6;
  for (double y : {0.0, 1.0})
    for (double f = -4.0; f <= 4.0; f += 0.25) {
      const double fd = -(loss(y, f + h) - loss(y, f - h)) / (2.0 * h);
      const double neg_gradient = y - 1.0 / (1.0 + std::exp(-f));
      check.require(std::abs(fd - neg_gradient) <=
                        1e-5 * std::max(1.0, std::abs(neg_gradient)),
                    "negative gradient vs finite difference");
    }
}

// ---------------------------------------------------------------------------
// 6. sampling audit

void criterion_sampling(Check& check) {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    // random synthetic masks on a 25x25 grid of 20 km cells
    Rng rng(seed * 1000);
    GeoTransform t;
    t.cell_size = 20000.0;
    t.origin_y = 25 * t.cell_size;
    Grid forest(25, 25, t, kDefaultNodata);
    for (int r = 0; r < 25; ++r)
      for (int c = 0; c < 25; ++c) forest.set(r, c, rng.uniform01() < 0.7 ? 1 : 0);
    FireMask fire;
    for (int year : {2020, 2021, 2022}) {
      Grid g(25, 25, t);
      for (int r = 0; r < 25; ++r)
        for (int c = 0; c < 25; ++c)
          if (rng.uniform01() < 0.03) g.set(r, c, 9.0);
          else if (rng.uniform01() < 0.02) g.set(r, c, double(1 + rng.below(8)));
      fire.years.emplace(year, std::move(g));
    }

    SplitSpec split;
    split.train_years = {2020, 2021};
    split.test_years = {2022};
    split.buffer_km = 25.0;

    ScenarioSplit s2;
    try {
      s2 = build_scenario(2, fire, forest, split, seed);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EmptyTestAfterBuffer ||
          e.code() == ErrorCode::InsufficientCandidates)
        continue;  // a legitimately infeasible random mask
      throw;
    }

    // exact all-pairs audit
    check.require(min_train_test_distance(s2.train, s2.test, CrsKind::Planar) >=
                      25.0 * 1000.0,
                  "scenario-2 buffer violated");

    // forest membership for scenarios 1 and 2
    const ScenarioSplit s1 = build_scenario(1, fire, forest, split, seed);
    for (const ScenarioSplit* s : {&s1, const_cast<const ScenarioSplit*>(&s2)})
      for (const SampleSet* set : {&s->train, &s->test})
        for (const auto& sample : set->samples) {
          const RowCol rc = cell_of(t, sample.x, sample.y, 25, 25);
          check.require(forest.at(rc.row, rc.col) == 1.0,
                        "sample outside the forest mask");
        }

    // no (cell, year) doubly labeled
    for (const SampleSet* set : {&s1.train, &s1.test}) {
      std::set<std::tuple<int, int, int, int>> fire_keys, nonfire_keys;
      for (const auto& sample : set->samples) {
        const RowCol rc = cell_of(t, sample.x, sample.y, 25, 25);
        const auto key = std::make_tuple(rc.row, rc.col, sample.year, 0);
        (sample.label == 1 ? fire_keys : nonfire_keys).insert(key);
      }
      for (const auto& key : nonfire_keys)
        check.require(fire_keys.count(key) == 0, "(cell,year) doubly labeled");
    }

    // fixed seed -> byte-identical sample CSVs
    const ScenarioSplit again = build_scenario(2, fire, forest, split, seed);
    std::ostringstream a, b;
    write_sample_csv(s2.train, a);
    write_sample_csv(again.train, b);
    check.require(a.str() == b.str(), "seeded sampling not byte-identical");
  }
}

// ---------------------------------------------------------------------------
// 7 + 9. synthetic end-to-end, I/O fidelity

struct E2eResult {
  double rf_auc_s1 = 0.0, gbt_auc_s1 = 0.0, xgb_auc_s1 = 0.0;
  double rf_auc_s2 = 0.0, gbt_auc_s2 = 0.0, xgb_auc_s2 = 0.0;
  double pipeline_seconds = 0.0;
  bool rerun_identical = false;
  bool cli_ok = false;
};

E2eResult run_e2e() {
  const fs::path dir = fs::temp_directory_path() / "wildfire_acceptance_e2e";
  fs::remove_all(dir);
  const SyntheticLandscape land = make_synthetic_landscape({});
  write_synthetic_fixture(land, dir, 1, 20150101);

  E2eResult result;
  auto auc_of = [](const fs::path& metrics_path, const char* model) {
    std::ifstream f(metrics_path);
    const auto doc = nlohmann::json::parse(f);
    return doc.at("models").at(model).at("auc").get<double>();
  };

#ifdef FIREMAP_BINARY
  {
    const auto start = std::chrono::steady_clock::now();
    const std::string cmd = std::string(FIREMAP_BINARY) + " pipeline --config " +
                            (dir / "config.toml").string() + " --out " +
                            (dir / "out_s1").string() + " 2>/dev/null";
    result.cli_ok = std::system(cmd.c_str()) == 0;
    result.pipeline_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  }
#endif
  result.rf_auc_s1 = auc_of(dir / "out_s1" / "evaluate" / "metrics.json", "rf");
  result.gbt_auc_s1 = auc_of(dir / "out_s1" / "evaluate" / "metrics.json", "gbt");
  result.xgb_auc_s1 = auc_of(dir / "out_s1" / "evaluate" / "metrics.json", "xgb");

  // rerun with the same seed -> byte-identical metrics JSON
  {
    PipelineConfig cfg = load_config(dir / "config.toml");
    PipelineRunner::Overrides overrides;
    overrides.out_dir = dir / "out_rerun";
    PipelineRunner runner(cfg, overrides);
    runner.run_pipeline();
    std::ifstream a(dir / "out_s1" / "evaluate" / "metrics.json", std::ios::binary);
    std::ifstream b(dir / "out_rerun" / "evaluate" / "metrics.json", std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    result.rerun_identical = !sa.str().empty() && sa.str() == sb.str();
  }

  // scenario 2 on the same landscape
  {
    write_synthetic_fixture(land, dir / "s2", 2, 20150101);
    PipelineConfig cfg = load_config(dir / "s2" / "config.toml");
    PipelineRunner::Overrides overrides;
    overrides.out_dir = dir / "out_s2";
    PipelineRunner runner(cfg, overrides);
    runner.run_pipeline();
    result.rf_auc_s2 = auc_of(dir / "out_s2" / "evaluate" / "metrics.json", "rf");
    result.gbt_auc_s2 = auc_of(dir / "out_s2" / "evaluate" / "metrics.json", "gbt");
    result.xgb_auc_s2 = auc_of(dir / "out_s2" / "evaluate" / "metrics.json", "xgb");
  }
  return result;
}

void criterion_e2e(const E2eResult& r, Check& check) {
  check.require(r.cli_ok, "firemap pipeline exited nonzero");
  check.require(r.pipeline_seconds < 60.0, "pipeline exceeded 60 s");
  check.require(r.rf_auc_s1 >= 0.90, "RF scenario-1 AUC < 0.90");
  check.require(r.gbt_auc_s1 >= 0.90, "GBT scenario-1 AUC < 0.90");
  check.require(r.xgb_auc_s1 >= 0.90, "XGB scenario-1 AUC < 0.90");
  check.require(r.rf_auc_s2 <= r.rf_auc_s1 + 0.01, "RF scenario-2 AUC too high");
  check.require(r.gbt_auc_s2 <= r.gbt_auc_s1 + 0.01, "GBT scenario-2 AUC too high");
  check.require(r.xgb_auc_s2 <= r.xgb_auc_s1 + 0.01, "XGB scenario-2 AUC too high");
}

// ---------------------------------------------------------------------------
// 8. imputation

void criterion_imputation(Check& check) {
  Rng rng(808);
  GeoTransform t;
  t.origin_y = 12;
  t.cell_size = 1;

  // identity on hole-free grids
  Grid full(12, 12, t, kDefaultNodata);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) full.set(r, c, rng.uniform(-10, 10));
  auto [knn_out, knn_rep] = knn_impute(full, 8, 10);
  auto [km_out, km_rep] = kmeans_impute(full, 6, 99);
  for (std::size_t i = 0; i < full.values().size(); ++i) {
    check.require(knn_out.values()[i] == full.values()[i], "knn not identity");
    check.require(km_out.values()[i] == full.values()[i], "kmeans not identity");
  }

  // fill bounds
  Grid holes(12, 12, t, kDefaultNodata);
  double lo = 1e300, hi = -1e300;
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      if (rng.uniform01() < 0.8) {
        const double v = rng.uniform(3, 17);
        holes.set(r, c, v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  auto [knn_filled, r1] = knn_impute(holes, 8, 10);
  auto [km_filled, r2] = kmeans_impute(holes, 4, 5);
  for (const Grid* g : {&knn_filled, &km_filled})
    for (double v : g->values())
      if (!g->is_nodata_value(v))
        check.require(v >= lo - 1e-12 && v <= hi + 1e-12, "fill out of bounds");

  // two-blob kmeans fixture
  Grid blobs(8, 8, t, kDefaultNodata);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) blobs.set(r, c, c < 4 ? 0.0 : 10.0);
  blobs.set(3, 6, blobs.nodata());
  auto [blob_filled, r3] = kmeans_impute(blobs, 2, 31);
  check.require(std::abs(blob_filled.at(3, 6) - 10.0) <= 1e-9,
                "kmeans hole not filled with its blob mean");
}

// ---------------------------------------------------------------------------
// 9. I/O fidelity (plus the pipeline rerun check from the e2e run)

void criterion_io(const E2eResult& e2e, Check& check) {
  Rng rng(909);
  char buf[64];
  auto round6 = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 1 + int(rng.below(15));
    const int h = 1 + int(rng.below(15));
    GeoTransform t;
    t.origin_x = double(int(rng.below(2000)) - 1000);
    t.origin_y = double(int(rng.below(2000)) + h);
    t.cell_size = double(1 + int(rng.below(90)));
    Grid g(w, h, t, kDefaultNodata);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        if (rng.uniform01() >= 0.2) g.set(r, c, round6(rng.uniform(-1e5, 1e5)));

    std::stringstream io;
    write_ascii_grid(g, io);
    const Grid back = read_ascii_grid(io);
    check.require(back.same_frame(g), "frame not reproduced");
    for (std::size_t i = 0; i < g.values().size(); ++i)
      check.require(back.values()[i] == g.values()[i], "cell not reproduced");
  }

  // model JSON round trip preserves predictions bit-for-bit
  const SampleSet data = blob_data(25, 17);
  GbtHyperparams gbt_hp;
  gbt_hp.n_estimators = 25;
  std::vector<Model> models;
  models.push_back(train_decision_tree(data));
  models.push_back(train_random_forest(data, RfHyperparams{}, 3));
  models.push_back(train_gbt(data, gbt_hp, 3));
  models.push_back(train_xgb(data, XgbHyperparams{}, 3));
  models.push_back(train_knn(data, KnnHyperparams{}));
  models.push_back(train_svm_rbf(data, SvmHyperparams{}, 3));
  for (const Model& m : models) {
    std::stringstream io;
    save_model(m, io);
    const Model back = load_model(io);
    for (int i = 0; i < 100; ++i) {
      const std::vector<double> q{rng.uniform(-6, 14), rng.uniform(-6, 14)};
      check.require(m.predict_proba(q) == back.predict_proba(q),
                    "model round trip changed a prediction");
    }
  }

  check.require(e2e.rerun_identical,
                "pipeline rerun did not reproduce metrics.json byte-for-byte");
}

// ---------------------------------------------------------------------------
// 10. risk classification

void criterion_risk(Check& check) {
  GeoTransform t;
  t.origin_y = 10;
  t.cell_size = 1;

  std::vector<double> uniform;
  for (int i = 0; i < 100; ++i) uniform.push_back(0.005 + 0.01 * i);
  const Grid prob(10, 10, t, kDefaultNodata, std::vector<double>(uniform));
  const RiskClassification risk = classify_risk(prob, 5);
  const double expected[] = {0.2, 0.4, 0.6, 0.8};
  for (int b = 0; b < 4; ++b)
    check.require(std::abs(risk.breaks[std::size_t(b)] - expected[b]) < 0.01,
                  "uniform-fixture break off by more than 0.01");
  for (std::int64_t count : class_histogram(risk.classes, 5))
    check.require(count == 20, "uniform fixture class size != 20");

  Rng rng(1010);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> values;
    for (int i = 0; i < 225; ++i) values.push_back(rng.uniform01());
    const Grid p(15, 15, t, kDefaultNodata, std::vector<double>(values));
    const RiskClassification rc = classify_risk(p, 5);

    // monotone in probability
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < values.size(); ++i)
      pairs.emplace_back(p.values()[i], rc.classes.values()[i]);
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 1; i < pairs.size(); ++i)
      check.require(pairs[i].second >= pairs[i - 1].second,
                    "class grid not monotone in probability");

    // exact rank invariance under a strictly increasing transform
    std::vector<double> transformed;
    for (double v : values) transformed.push_back(std::atan(3.0 * v));
    const Grid tp(15, 15, t, kDefaultNodata, std::move(transformed));
    const RiskClassification rc2 = classify_risk(tp, 5);
    for (std::size_t i = 0; i < values.size(); ++i)
      check.require(rc.classes.values()[i] == rc2.classes.values()[i],
                    "classes changed under a monotone transform");
  }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  E2eResult e2e;
  bool e2e_ran = false;
  try {
    e2e = run_e2e();
    e2e_ran = true;
  } catch (const std::exception& e) {
    std::cerr << "end-to-end setup failed: " << e.what() << "\n";
  }

  const std::vector<Criterion> criteria{
      {1, "mutual-information oracle equivalence", criterion_mi},
      {2, "VIF oracle equivalence", criterion_vif},
      {3, "AUC oracle equivalence", criterion_auc},
      {4, "weighted recall == accuracy identity", criterion_metric_identity},
      {5, "model reductions (RF->DT, XGB->GBT, gradients)", criterion_reductions},
      {6, "sampling audit (buffer, forest, labels, determinism)",
       criterion_sampling},
      {7, "synthetic end-to-end (AUC floors, buffer drop, < 60 s)",
       [&](Check& c) {
         c.require(e2e_ran, "end-to-end run failed");
         if (e2e_ran) criterion_e2e(e2e, c);
       }},
      {8, "imputation (identity, bounds, two-blob mean)", criterion_imputation},
      {9, "I/O fidelity (ascii, model JSON, pipeline rerun)",
       [&](Check& c) {
         c.require(e2e_ran, "end-to-end run failed");
         criterion_io(e2e, c);
       }},
      {10, "risk classification (quantiles, monotone, rank-invariant)",
       criterion_risk},
  };

  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    if (check.failures == 0) {
      std::printf("PASS  %2d. %s\n", criterion.id, criterion.name);
    } else {
      std::printf("FAIL  %2d. %s (%d checks; first: %s)\n", criterion.id,
                  criterion.name, check.failures, check.first_failure.c_str());
      ++failed;
    }
  }
  if (e2e_ran)
    std::printf("info: pipeline wall time %.1f s; S1 AUC rf/gbt/xgb = "
                "%.3f/%.3f/%.3f; S2 = %.3f/%.3f/%.3f\n",
                e2e.pipeline_seconds, e2e.rf_auc_s1, e2e.gbt_auc_s1, e2e.xgb_auc_s1,
                e2e.rf_auc_s2, e2e.gbt_auc_s2, e2e.xgb_auc_s2);
  return failed;
}
