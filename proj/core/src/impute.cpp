#include "wildfire/impute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wildfire/error.hpp"
#include "wildfire/parallel.hpp"
#include "wildfire/rng.hpp"

namespace wildfire {

namespace {

struct Offset {
  std::int64_t dist2;
  int dr;
  int dc;
};

/// All offsets with Euclidean length <= radius, sorted by (distance,
/// row, column) so the first k valid hits are exactly the k nearest
/// neighbors under the documented tie-breaking.
std::vector<Offset> sorted_offsets(int radius) {
  std::vector<Offset> offsets;
  const std::int64_t r2 = std::int64_t(radius) * radius;
  for (int dr = -radius; dr <= radius; ++dr)
    for (int dc = -radius; dc <= radius; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const std::int64_t d2 = std::int64_t(dr) * dr + std::int64_t(dc) * dc;
      if (d2 <= r2) offsets.push_back({d2, dr, dc});
    }
  std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    if (a.dr != b.dr) return a.dr < b.dr;
    return a.dc < b.dc;
  });
  return offsets;
}

}  // namespace

std::pair<Grid, ImputeReport> knn_impute(const Grid& g, int k, int max_radius) {
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  if (max_radius < 1) throw Error(ErrorCode::InvalidRadius, "max_radius must be >= 1");

  const auto offsets = sorted_offsets(max_radius);
  Grid out = g;
  ImputeReport report;
  report.method = ImputeReport::Method::Knn;
  report.k = k;
  report.max_radius = max_radius;

  std::vector<std::int64_t> holes;
  for (int r = 0; r < g.height(); ++r)
    for (int c = 0; c < g.width(); ++c)
      if (g.is_nodata(r, c)) holes.push_back(std::int64_t(r) * g.width() + c);

  std::vector<char> filled(holes.size(), 0);
  std::vector<double> fill_value(holes.size(), 0.0);
  parallel_for(0, std::int64_t(holes.size()), [&](std::int64_t h) {
    const int r = int(holes[std::size_t(h)] / g.width());
    const int c = int(holes[std::size_t(h)] % g.width());
    double sum = 0.0;
    int found = 0;
    for (const Offset& o : offsets) {
      const int rr = r + o.dr, cc = c + o.dc;
      if (rr < 0 || cc < 0 || rr >= g.height() || cc >= g.width()) continue;
      const double v = g.at(rr, cc);
      if (g.is_nodata_value(v)) continue;
      sum += v;
      if (++found == k) break;
    }
    if (found > 0) {
      filled[std::size_t(h)] = 1;
      fill_value[std::size_t(h)] = sum / double(found);
    }
  });

  for (std::size_t h = 0; h < holes.size(); ++h) {
    if (filled[h]) {
      out.set(int(holes[h] / g.width()), int(holes[h] % g.width()), fill_value[h]);
      ++report.filled;
    } else {
      ++report.unfilled;
    }
  }
  return {std::move(out), report};
}

std::pair<Grid, ImputeReport> kmeans_impute(const Grid& g, int k_clusters,
                                            std::uint64_t seed, int max_iter,
                                            double tol) {
  if (k_clusters < 1)
    throw Error(ErrorCode::InvalidK, "k_clusters must be >= 1");

  struct Cell {
    int row, col;
    double value;
  };
  std::vector<Cell> valid;
  std::vector<std::int64_t> holes;
  for (int r = 0; r < g.height(); ++r)
    for (int c = 0; c < g.width(); ++c) {
      if (g.is_nodata(r, c))
        holes.push_back(std::int64_t(r) * g.width() + c);
      else
        valid.push_back({r, c, g.at(r, c)});
    }
  if (std::int64_t(valid.size()) < k_clusters)
    throw Error(ErrorCode::TooFewValidCells,
                "need at least k_clusters valid cells");

  ImputeReport report;
  report.method = ImputeReport::Method::Kmeans;
  report.clusters = k_clusters;
  report.seed = seed;

  if (holes.empty()) return {g, report};

  // z-score the (row, col, value) triples
  double mean[3] = {0, 0, 0};
  for (const Cell& c : valid) {
    mean[0] += c.row;
    mean[1] += c.col;
    mean[2] += c.value;
  }
  for (double& m : mean) m /= double(valid.size());
  double var[3] = {0, 0, 0};
  for (const Cell& c : valid) {
    var[0] += (c.row - mean[0]) * (c.row - mean[0]);
    var[1] += (c.col - mean[1]) * (c.col - mean[1]);
    var[2] += (c.value - mean[2]) * (c.value - mean[2]);
  }
  double sd[3];
  for (int i = 0; i < 3; ++i)
    sd[i] = var[i] > 0.0 ? std::sqrt(var[i] / double(valid.size())) : 1.0;

  const std::size_t n = valid.size();
  std::vector<double> fx(n), fy(n), fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    fx[i] = (valid[i].row - mean[0]) / sd[0];
    fy[i] = (valid[i].col - mean[1]) / sd[1];
    fv[i] = (valid[i].value - mean[2]) / sd[2];
  }
  auto dist2_to = [&](std::size_t i, const double* center) {
    const double dx = fx[i] - center[0];
    const double dy = fy[i] - center[1];
    const double dv = fv[i] - center[2];
    return dx * dx + dy * dy + dv * dv;
  };

  // k-means++ seeding
  const int k = k_clusters;
  std::vector<double> centers(std::size_t(k) * 3);
  Rng rng(seed);
  {
    const std::size_t first = std::size_t(rng.below(n));
    centers[0] = fx[first];
    centers[1] = fy[first];
    centers[2] = fv[first];
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < c; ++j)
          best = std::min(best, dist2_to(i, &centers[std::size_t(j) * 3]));
        d2[i] = best;
        total += best;
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        const double target = rng.uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = std::size_t(rng.below(n));
      }
      centers[std::size_t(c) * 3 + 0] = fx[pick];
      centers[std::size_t(c) * 3 + 1] = fy[pick];
      centers[std::size_t(c) * 3 + 2] = fv[pick];
    }
  }

  // Lloyd iterations; assignments in parallel, updates in index order so
  // a fixed seed gives byte-identical output.
  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    parallel_for(0, std::int64_t(n), [&](std::int64_t i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double d = dist2_to(std::size_t(i), &centers[std::size_t(c) * 3]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      assign[std::size_t(i)] = best_c;
    });

    std::vector<double> sums(std::size_t(k) * 3, 0.0);
    std::vector<std::int64_t> counts(std::size_t(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = std::size_t(assign[i]);
      sums[c * 3 + 0] += fx[i];
      sums[c * 3 + 1] += fy[i];
      sums[c * 3 + 2] += fv[i];
      ++counts[c];
    }

    // reseed empty clusters from the point farthest from its center
    for (int c = 0; c < k; ++c) {
      if (counts[std::size_t(c)] > 0) continue;
      double worst = -1.0;
      std::size_t far = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = dist2_to(i, &centers[std::size_t(assign[i]) * 3]);
        if (d > worst) {
          worst = d;
          far = i;
        }
      }
      centers[std::size_t(c) * 3 + 0] = fx[far];
      centers[std::size_t(c) * 3 + 1] = fy[far];
      centers[std::size_t(c) * 3 + 2] = fv[far];
      assign[far] = c;
    }

    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[std::size_t(c)] == 0) continue;
      for (int d = 0; d < 3; ++d) {
        const double next = sums[std::size_t(c) * 3 + d] / double(counts[std::size_t(c)]);
        shift = std::max(shift, std::fabs(next - centers[std::size_t(c) * 3 + d]));
        centers[std::size_t(c) * 3 + d] = next;
      }
    }
    if (shift < tol) break;
  }

  // final assignment + per-cluster mean of raw values
  parallel_for(0, std::int64_t(n), [&](std::int64_t i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (int c = 0; c < k; ++c) {
      const double d = dist2_to(std::size_t(i), &centers[std::size_t(c) * 3]);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    assign[std::size_t(i)] = best_c;
  });
  std::vector<double> value_sum(std::size_t(k), 0.0);
  std::vector<std::int64_t> counts(std::size_t(k), 0);
  for (std::size_t i = 0; i < n; ++i) {
    value_sum[std::size_t(assign[i])] += valid[i].value;
    ++counts[std::size_t(assign[i])];
  }
  std::vector<double> cluster_mean(std::size_t(k), 0.0);
  std::vector<char> cluster_used(std::size_t(k), 0);
  for (int c = 0; c < k; ++c) {
    if (counts[std::size_t(c)] > 0) {
      cluster_mean[std::size_t(c)] = value_sum[std::size_t(c)] / double(counts[std::size_t(c)]);
      cluster_used[std::size_t(c)] = 1;
    }
  }

  // fill: nearest centroid in normalized (row, col) space
  Grid out = g;
  for (std::int64_t hole : holes) {
    const int r = int(hole / g.width());
    const int c = int(hole % g.width());
    const double zr = (r - mean[0]) / sd[0];
    const double zc = (c - mean[1]) / sd[1];
    double best = std::numeric_limits<double>::infinity();
    int best_c = -1;
    for (int j = 0; j < k; ++j) {
      if (!cluster_used[std::size_t(j)]) continue;
      const double dx = zr - centers[std::size_t(j) * 3 + 0];
      const double dy = zc - centers[std::size_t(j) * 3 + 1];
      const double d = dx * dx + dy * dy;
      if (d < best) {
        best = d;
        best_c = j;
      }
    }
    if (best_c >= 0) {
      out.set(r, c, cluster_mean[std::size_t(best_c)]);
      ++report.filled;
    } else {
      ++report.unfilled;
    }
  }
  return {std::move(out), report};
}

}  // namespace wildfire
