#include "wildfire/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "wildfire/distance.hpp"
#include "wildfire/error.hpp"
#include "wildfire/rng.hpp"
#include "wildfire/temporal.hpp"

namespace wildfire {

void FireMask::validate() const {
  if (years.empty())
    throw Error(ErrorCode::InvalidArgument, "fire mask has no year layers");
  const Grid& first = years.begin()->second;
  for (const auto& [year, grid] : years) {
    if (!grid.same_frame(first))
      throw Error(ErrorCode::FrameMismatch,
                  "fire mask year " + std::to_string(year) + " frame differs");
    for (double v : grid.values()) {
      if (grid.is_nodata_value(v)) continue;
      if (v < 1.0 || v > 9.0 || v != std::floor(v))
        throw Error(ErrorCode::InvalidArgument,
                    "fire mask values must be integers in 1..9");
    }
  }
}

std::vector<FirePoint> extract_fire_points(const FireMask& mask, int min_class) {
  std::vector<FirePoint> points;
  for (const auto& [year, grid] : mask.years) {
    for (int r = 0; r < grid.height(); ++r) {
      for (int c = 0; c < grid.width(); ++c) {
        const double v = grid.at(r, c);
        if (grid.is_nodata_value(v) || v < double(min_class)) continue;
        const XY p = center_of(grid.transform(), r, c, grid.width(), grid.height());
        points.push_back({p.x, p.y, year});
      }
    }
  }
  return points;
}

namespace {

struct CellYear {
  std::int64_t cell;
  int year;
};

/// One shuffled pass over eligible (cell, year) pairs filling the train
/// and test buckets; a shared used-cell set implements the
/// unique-across-years rule across both buckets.
struct NonfireDraw {
  std::vector<FirePoint> train;
  std::vector<FirePoint> test;
};

NonfireDraw draw_nonfire(const Grid& candidate_mask,
                         const std::vector<FirePoint>& fire_points,
                         const std::set<int>& train_years,
                         const std::set<int>& test_years, std::int64_t n_train,
                         std::int64_t n_test, std::uint64_t seed,
                         bool unique_across_years) {
  const GeoTransform& t = candidate_mask.transform();
  const int w = candidate_mask.width();
  const int h = candidate_mask.height();

  std::unordered_map<int, std::unordered_set<std::int64_t>> fire_cells;
  for (const FirePoint& p : fire_points) {
    const RowCol rc = cell_of(t, p.x, p.y, w, h);
    fire_cells[p.year].insert(std::int64_t(rc.row) * w + rc.col);
  }

  std::vector<int> years(train_years.begin(), train_years.end());
  years.insert(years.end(), test_years.begin(), test_years.end());
  std::sort(years.begin(), years.end());

  std::vector<std::int64_t> eligible_cells;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (candidate_mask.at(r, c) == 1.0)
        eligible_cells.push_back(std::int64_t(r) * w + c);

  std::vector<CellYear> pairs;
  pairs.reserve(eligible_cells.size() * years.size());
  for (int year : years) {
    const auto fire_it = fire_cells.find(year);
    for (std::int64_t cell : eligible_cells) {
      if (fire_it != fire_cells.end() && fire_it->second.count(cell)) continue;
      pairs.push_back({cell, year});
    }
  }

  Rng rng(seed);
  rng.shuffle(pairs);

  NonfireDraw draw;
  std::unordered_set<std::int64_t> used;
  for (const CellYear& p : pairs) {
    const bool is_train = train_years.count(p.year) > 0;
    auto& bucket = is_train ? draw.train : draw.test;
    const std::int64_t want = is_train ? n_train : n_test;
    if (std::int64_t(bucket.size()) >= want) continue;
    if (unique_across_years && used.count(p.cell)) continue;
    const int r = int(p.cell / w);
    const int c = int(p.cell % w);
    const XY center = center_of(t, r, c, w, h);
    bucket.push_back({center.x, center.y, p.year});
    if (unique_across_years) used.insert(p.cell);
    if (std::int64_t(draw.train.size()) >= n_train &&
        std::int64_t(draw.test.size()) >= n_test)
      break;
  }
  if (std::int64_t(draw.train.size()) < n_train ||
      std::int64_t(draw.test.size()) < n_test)
    throw Error(ErrorCode::InsufficientCandidates,
                "not enough eligible non-fire cells");
  return draw;
}

double sample_pair_distance(const LabeledSample& a, const LabeledSample& b,
                            CrsKind crs) {
  return point_distance(XY{a.x, a.y}, XY{b.x, b.y}, crs);
}

}  // namespace

std::vector<FirePoint> sample_nonfire(const Grid& candidate_mask,
                                      const std::vector<FirePoint>& fire_points,
                                      std::span<const int> years, std::int64_t n,
                                      std::uint64_t seed, bool unique_across_years) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  std::set<int> year_set(years.begin(), years.end());
  if (year_set.empty())
    throw Error(ErrorCode::InvalidArgument, "need at least one year");
  NonfireDraw draw = draw_nonfire(candidate_mask, fire_points, year_set, {}, n, 0,
                                  seed, unique_across_years);
  return std::move(draw.train);
}

ScenarioSplit build_scenario(int scenario, const FireMask& fire_mask,
                             const Grid& forest_mask, const SplitSpec& split,
                             std::uint64_t seed, const ScenarioOptions& options) {
  if (scenario < 1 || scenario > 3)
    throw Error(ErrorCode::InvalidArgument, "scenario must be 1, 2 or 3");
  if (options.ratio <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "ratio must be > 0");
  if (split.buffer_km < 0.0)
    throw Error(ErrorCode::InvalidArgument, "buffer_km must be >= 0");
  for (int y : split.train_years)
    if (split.test_years.count(y))
      throw Error(ErrorCode::InvalidArgument,
                  "train and test years must be disjoint");
  fire_mask.validate();
  const Grid& mask_frame = fire_mask.years.begin()->second;
  if (!mask_frame.same_frame(forest_mask))
    throw Error(ErrorCode::FrameMismatch, "forest mask frame differs from fire mask");

  const bool forest_only = scenario == 1 || scenario == 2;
  const GeoTransform& t = forest_mask.transform();
  const int w = forest_mask.width();
  const int h = forest_mask.height();

  // All class-9 cells; forest scenarios then keep forest cells only.
  std::vector<FirePoint> all_fire = extract_fire_points(fire_mask, 9);
  std::vector<FirePoint> fire;
  fire.reserve(all_fire.size());
  for (const FirePoint& p : all_fire) {
    if (split.train_years.count(p.year) == 0 && split.test_years.count(p.year) == 0)
      continue;
    if (forest_only) {
      const RowCol rc = cell_of(t, p.x, p.y, w, h);
      if (forest_mask.at(rc.row, rc.col) != 1.0) continue;
    }
    fire.push_back(p);
  }

  std::vector<FirePoint> train_fire, test_fire;
  for (const FirePoint& p : fire)
    (split.train_years.count(p.year) ? train_fire : test_fire).push_back(p);
  if (train_fire.empty())
    throw Error(ErrorCode::InsufficientCandidates, "no fire points in train years");
  if (test_fire.empty())
    throw Error(ErrorCode::InsufficientCandidates, "no fire points in test years");

  // Non-fire eligibility: forest cells for scenarios 1-2, the whole
  // domain (any cell with forest-mask data) for scenario 3.
  Grid candidate(w, h, t, forest_mask.nodata());
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double v = forest_mask.at(r, c);
      if (forest_mask.is_nodata_value(v)) continue;
      candidate.set(r, c, (forest_only ? v == 1.0 : true) ? 1.0 : 0.0);
    }

  const std::int64_t n_train_nf = std::llround(options.ratio * double(train_fire.size()));
  const std::int64_t n_test_nf = std::llround(options.ratio * double(test_fire.size()));
  // Exclude same-year class-9 cells everywhere, not just the forest ones.
  NonfireDraw nonfire =
      draw_nonfire(candidate, all_fire, split.train_years, split.test_years,
                   n_train_nf, n_test_nf, stage_seed(seed, "nonfire"),
                   options.unique_across_years);

  auto to_samples = [](const std::vector<FirePoint>& pts, int label) {
    std::vector<LabeledSample> out;
    out.reserve(pts.size());
    for (const FirePoint& p : pts) {
      LabeledSample s;
      s.x = p.x;
      s.y = p.y;
      s.year = p.year;
      s.label = label;
      out.push_back(std::move(s));
    }
    return out;
  };

  ScenarioSplit result;
  result.train.samples = to_samples(train_fire, 1);
  auto train_nf = to_samples(nonfire.train, 0);
  result.train.samples.insert(result.train.samples.end(), train_nf.begin(),
                              train_nf.end());
  result.test.samples = to_samples(test_fire, 1);
  auto test_nf = to_samples(nonfire.test, 0);
  result.test.samples.insert(result.test.samples.end(), test_nf.begin(),
                             test_nf.end());

  for (SampleSet* set : {&result.train, &result.test}) {
    set->provenance.scenario = scenario;
    set->provenance.seed = seed;
  }
  result.train.provenance.role = "train";
  result.test.provenance.role = "test";

  if (scenario == 2 && split.buffer_km > 0.0) {
    const double buffer = split.buffer_km * 1000.0;  // meters
    std::vector<LabeledSample> kept;
    kept.reserve(result.test.samples.size());
    std::int64_t discarded = 0;
    for (const LabeledSample& s : result.test.samples) {
      bool inside = false;
      for (const LabeledSample& tr : result.train.samples) {
        if (sample_pair_distance(s, tr, t.crs) < buffer) {
          inside = true;
          break;
        }
      }
      if (inside)
        ++discarded;
      else
        kept.push_back(s);
    }
    result.test.samples = std::move(kept);
    result.test.provenance.buffer_discarded = discarded;
    if (result.test.samples.empty())
      throw Error(ErrorCode::EmptyTestAfterBuffer,
                  "buffer removed every test sample");
  }
  return result;
}

SampleSet attach_features(const SampleSet& points, const FeatureStack& stack,
                          const AttachOptions& options) {
  const GeoTransform& t = stack.transform();
  const int w = stack.width();
  const int h = stack.height();

  // Resolve each band to one grid per needed (band, year) pair up front.
  struct Resolved {
    const Grid* static_grid = nullptr;          // static or aggregated
    std::map<int, Grid> per_year;               // anomaly grids
    bool per_year_mode = false;
  };
  std::vector<Grid> owned;  // keeps aggregates alive
  owned.reserve(stack.size());
  std::set<int> years_needed;
  for (const auto& s : points.samples) years_needed.insert(s.year);

  std::vector<Resolved> resolved;
  resolved.reserve(stack.size());
  for (const auto& [name, band] : stack.bands()) {
    (void)name;
    Resolved r;
    if (band.is_static()) {
      r.static_grid = &band.static_grid();
    } else if (options.mode == YearMode::AggregatedStatic) {
      owned.push_back(aggregate(band));
      r.static_grid = &owned.back();
    } else {
      r.per_year_mode = true;
      for (int year : years_needed) {
        if (band.years().count(year) == 0)
          throw Error(ErrorCode::UnknownYear,
                      "band lacks year " + std::to_string(year));
        r.per_year.emplace(year, anomaly(band, year));
      }
    }
    resolved.push_back(std::move(r));
  }

  SampleSet out;
  out.feature_names = stack.band_names();
  out.provenance = points.provenance;
  for (const auto& [name, band] : stack.bands())
    if (band.categorical) out.categorical_features.push_back(name);

  for (const LabeledSample& p : points.samples) {
    RowCol rc;
    try {
      rc = cell_of(t, p.x, p.y, w, h);
    } catch (const Error&) {
      ++out.provenance.dropped_nodata;
      continue;
    }
    LabeledSample s = p;
    s.features.clear();
    s.features.reserve(stack.size());
    bool ok = true;
    for (const Resolved& r : resolved) {
      const Grid& g = r.per_year_mode ? r.per_year.at(p.year) : *r.static_grid;
      const double v = g.at(rc.row, rc.col);
      if (g.is_nodata_value(v)) {
        ok = false;
        break;
      }
      s.features.push_back(v);
    }
    if (ok)
      out.samples.push_back(std::move(s));
    else
      ++out.provenance.dropped_nodata;
  }
  return out;
}

std::vector<std::vector<std::int64_t>> kfold(std::int64_t n, int k,
                                             std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
  if (n < k) throw Error(ErrorCode::TooFewSamples, "need at least k samples");
  std::vector<std::int64_t> indices(static_cast<std::size_t>(n));
  std::iota(indices.begin(), indices.end(), 0);
  Rng rng(seed);
  rng.shuffle(indices);

  std::vector<std::vector<std::int64_t>> folds(static_cast<std::size_t>(k));
  const std::int64_t base = n / k;
  const std::int64_t extra = n % k;
  std::size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const std::int64_t size = base + (f < extra ? 1 : 0);
    auto& fold = folds[std::size_t(f)];
    fold.assign(indices.begin() + std::ptrdiff_t(pos),
                indices.begin() + std::ptrdiff_t(pos + std::size_t(size)));
    std::sort(fold.begin(), fold.end());
    pos += std::size_t(size);
  }
  return folds;
}

double min_train_test_distance(const SampleSet& train, const SampleSet& test,
                               CrsKind crs) {
  double best = std::numeric_limits<double>::infinity();
  for (const LabeledSample& a : test.samples)
    for (const LabeledSample& b : train.samples)
      best = std::min(best, sample_pair_distance(a, b, crs));
  return best;
}

}  // namespace wildfire
