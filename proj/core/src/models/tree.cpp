#include "wildfire/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wildfire/error.hpp"

namespace wildfire {

Dataset Dataset::from_samples(const SampleSet& samples) {
  Dataset d;
  d.rows = samples.size();
  d.cols = samples.feature_names.size();
  d.x.reserve(d.rows * d.cols);
  d.y.reserve(d.rows);
  for (const auto& s : samples.samples) {
    if (s.features.size() != d.cols)
      throw Error(ErrorCode::FeatureMismatch, "sample feature count mismatch");
    d.x.insert(d.x.end(), s.features.begin(), s.features.end());
    d.y.push_back(double(s.label));
  }
  return d;
}

double Tree::predict(std::span<const double> features) const {
  return nodes[std::size_t(leaf_of(features))].value;
}

int Tree::leaf_of(std::span<const double> features) const {
  int idx = 0;
  while (!nodes[std::size_t(idx)].is_leaf()) {
    const TreeNode& node = nodes[std::size_t(idx)];
    idx = features[std::size_t(node.feature)] < node.threshold ? node.left
                                                               : node.right;
  }
  return idx;
}

namespace {

constexpr double kGainEps = 1e-12;

double gini(std::int64_t pos, std::int64_t n) {
  const double p = double(pos) / double(n);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;

  /// Gini gains are ratios of counts, so exact ties across features are
  /// routine. Preferring the smaller threshold (then the lower feature
  /// index) keeps the choice deterministic and, as long as thresholds
  /// differ, equivariant under feature-column permutations.
  bool beats(const SplitChoice& best, double gain_eps) const {
    if (!(gain > gain_eps)) return false;
    if (!best.found) return true;
    if (gain != best.gain) return gain > best.gain;
    return threshold < best.threshold;
  }
};

/// Candidate columns for one node: all of them, or an mtry-sized random
/// subset (ascending order either way, so ties break identically).
std::vector<std::size_t> node_features(std::size_t p, int mtry, Rng* rng) {
  std::vector<std::size_t> all(p);
  std::iota(all.begin(), all.end(), 0);
  if (mtry <= 0 || std::size_t(mtry) >= p || rng == nullptr) return all;
  for (int i = 0; i < mtry; ++i) {
    const std::size_t j = i + std::size_t(rng->below(std::uint64_t(p - std::size_t(i))));
    std::swap(all[std::size_t(i)], all[j]);
  }
  all.resize(std::size_t(mtry));
  std::sort(all.begin(), all.end());
  return all;
}

struct CartBuilder {
  const Dataset& data;
  const CartParams& params;
  Rng* rng;
  std::vector<TreeNode> nodes;
  double n_root = 0.0;

  int build(std::vector<std::size_t>& indices, int depth) {
    const std::int64_t n = std::int64_t(indices.size());
    std::int64_t pos = 0;
    for (std::size_t i : indices) pos += data.y[i] > 0.5 ? 1 : 0;

    const int node_id = int(nodes.size());
    nodes.emplace_back();
    nodes[std::size_t(node_id)].n = n;
    nodes[std::size_t(node_id)].value = double(pos) / double(n);

    const bool can_split = pos != 0 && pos != n && n >= params.min_samples_split &&
                           (params.max_depth <= 0 || depth < params.max_depth);
    if (!can_split) return node_id;

    const SplitChoice split = best_split(indices, pos);
    if (!split.found) return node_id;

    std::vector<std::size_t> left, right;
    left.reserve(indices.size());
    right.reserve(indices.size());
    for (std::size_t i : indices) {
      (data.at(i, std::size_t(split.feature)) < split.threshold ? left : right)
          .push_back(i);
    }
    indices.clear();
    indices.shrink_to_fit();

    nodes[std::size_t(node_id)].feature = split.feature;
    nodes[std::size_t(node_id)].threshold = split.threshold;
    nodes[std::size_t(node_id)].gain = (double(n) / n_root) * split.gain;
    const int left_id = build(left, depth + 1);
    nodes[std::size_t(node_id)].left = left_id;
    const int right_id = build(right, depth + 1);
    nodes[std::size_t(node_id)].right = right_id;
    return node_id;
  }

  SplitChoice best_split(const std::vector<std::size_t>& indices, std::int64_t pos) {
    const std::int64_t n = std::int64_t(indices.size());
    const double parent = gini(pos, n);
    SplitChoice best;

    struct Entry {
      double value;
      int label;
    };
    std::vector<Entry> column(indices.size());
    const auto features = node_features(data.cols, params.mtry, rng);
    for (std::size_t f : features) {
      for (std::size_t i = 0; i < indices.size(); ++i)
        column[i] = {data.at(indices[i], f), data.y[indices[i]] > 0.5 ? 1 : 0};
      std::sort(column.begin(), column.end(),
                [](const Entry& a, const Entry& b) { return a.value < b.value; });

      std::int64_t left_n = 0, left_pos = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        ++left_n;
        left_pos += column[i].label;
        if (column[i].value == column[i + 1].value) continue;
        const std::int64_t right_n = n - left_n;
        if (left_n < params.min_samples_leaf || right_n < params.min_samples_leaf)
          continue;
        const double lo = column[i].value;
        const double hi = column[i + 1].value;
        const double threshold = lo + (hi - lo) / 2.0;
        // Midpoints of adjacent doubles can collapse onto an endpoint;
        // the predicate x < threshold must reproduce this partition.
        if (!(lo < threshold && threshold <= hi)) continue;
        const double gain = parent -
                            (double(left_n) / double(n)) * gini(left_pos, left_n) -
                            (double(right_n) / double(n)) *
                                gini(pos - left_pos, right_n);
        const SplitChoice candidate{true, int(f), threshold, gain};
        if (candidate.beats(best, kGainEps)) best = candidate;
      }
    }
    return best;
  }
};

}  // namespace

Tree build_cart(const Dataset& data, std::span<const std::size_t> indices,
                const CartParams& params, Rng* rng) {
  if (indices.empty()) throw Error(ErrorCode::EmptyData, "no training rows");
  if (data.cols == 0) throw Error(ErrorCode::EmptyData, "no features");
  CartBuilder builder{data, params, rng, {}, double(indices.size())};
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  builder.build(idx, 0);
  Tree tree;
  tree.nodes = std::move(builder.nodes);
  return tree;
}

namespace {

struct GradientBuilder {
  const Dataset& data;
  std::span<const double> residual;
  std::span<const double> hessian;
  std::span<const std::size_t> features;
  const GradientTreeParams& params;
  std::vector<TreeNode> nodes;

  double leaf_value(double sum_r, double sum_h) const {
    if (params.gain == SplitGain::Newton) return sum_r / (sum_h + params.lambda);
    return sum_r / std::max(sum_h, 1e-12);
  }

  double score(double sum_r, double sum_h, double n) const {
    // Higher is better; the gain of a split is score(L)+score(R)-score(P).
    if (params.gain == SplitGain::Newton)
      return 0.5 * sum_r * sum_r / (sum_h + params.lambda);
    return sum_r * sum_r / n;
  }

  int build(std::vector<std::size_t>& indices, int depth) {
    const std::int64_t n = std::int64_t(indices.size());
    double sum_r = 0.0, sum_h = 0.0;
    for (std::size_t i : indices) {
      sum_r += residual[i];
      sum_h += hessian[i];
    }

    const int node_id = int(nodes.size());
    nodes.emplace_back();
    nodes[std::size_t(node_id)].n = n;
    nodes[std::size_t(node_id)].value = leaf_value(sum_r, sum_h);

    if (n < 2 || (params.max_depth > 0 && depth >= params.max_depth))
      return node_id;

    const SplitChoice split = best_split(indices, sum_r, sum_h);
    if (!split.found) return node_id;

    std::vector<std::size_t> left, right;
    left.reserve(indices.size());
    right.reserve(indices.size());
    for (std::size_t i : indices)
      (data.at(i, std::size_t(split.feature)) < split.threshold ? left : right)
          .push_back(i);
    indices.clear();
    indices.shrink_to_fit();

    nodes[std::size_t(node_id)].feature = split.feature;
    nodes[std::size_t(node_id)].threshold = split.threshold;
    nodes[std::size_t(node_id)].gain = split.gain;
    const int left_id = build(left, depth + 1);
    nodes[std::size_t(node_id)].left = left_id;
    const int right_id = build(right, depth + 1);
    nodes[std::size_t(node_id)].right = right_id;
    return node_id;
  }

  SplitChoice best_split(const std::vector<std::size_t>& indices, double sum_r,
                         double sum_h) {
    const std::int64_t n = std::int64_t(indices.size());
    const double parent = score(sum_r, sum_h, double(n));
    SplitChoice best;

    struct Entry {
      double value;
      double r;
      double h;
    };
    std::vector<Entry> column(indices.size());
    for (std::size_t f : features) {
      for (std::size_t i = 0; i < indices.size(); ++i)
        column[i] = {data.at(indices[i], f), residual[indices[i]],
                     hessian[indices[i]]};
      std::sort(column.begin(), column.end(),
                [](const Entry& a, const Entry& b) { return a.value < b.value; });

      double left_r = 0.0, left_h = 0.0;
      std::int64_t left_n = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left_r += column[i].r;
        left_h += column[i].h;
        ++left_n;
        if (column[i].value == column[i + 1].value) continue;
        const std::int64_t right_n = n - left_n;
        if (left_n < params.min_samples_leaf || right_n < params.min_samples_leaf)
          continue;
        if (params.gain == SplitGain::Newton &&
            (left_h < params.min_child_weight ||
             sum_h - left_h < params.min_child_weight))
          continue;
        const double lo = column[i].value;
        const double hi = column[i + 1].value;
        const double threshold = lo + (hi - lo) / 2.0;
        if (!(lo < threshold && threshold <= hi)) continue;
        const double gain = score(left_r, left_h, double(left_n)) +
                            score(sum_r - left_r, sum_h - left_h, double(right_n)) -
                            parent;
        const SplitChoice candidate{true, int(f), threshold, gain};
        if (candidate.beats(best, kGainEps)) best = candidate;
      }
    }
    return best;
  }
};

}  // namespace

Tree build_gradient_tree(const Dataset& data, std::span<const double> residual,
                         std::span<const double> hessian,
                         std::span<const std::size_t> indices,
                         std::span<const std::size_t> features,
                         const GradientTreeParams& params) {
  if (indices.empty()) throw Error(ErrorCode::EmptyData, "no training rows");
  std::vector<std::size_t> all_features;
  if (features.empty()) {
    all_features.resize(data.cols);
    std::iota(all_features.begin(), all_features.end(), 0);
    features = all_features;
  }
  GradientBuilder builder{data, residual, hessian, features, params, {}};
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  builder.build(idx, 0);
  Tree tree;
  tree.nodes = std::move(builder.nodes);
  return tree;
}

}  // namespace wildfire
