#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wildfire/rng.hpp"
#include "wildfire/sample_set.hpp"

namespace wildfire {

/// Flat row-major training matrix with 0/1 targets.
struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<double> y;

  double at(std::size_t row, std::size_t col) const { return x[row * cols + col]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(x).subspan(r * cols, cols);
  }

  static Dataset from_samples(const SampleSet& samples);
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf probability (CART) or boosting weight
  double gain = 0.0;   // importance contribution of this split
  std::int64_t n = 0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> features) const;
  /// Index of the leaf a row falls into.
  int leaf_of(std::span<const double> features) const;
};

struct CartParams {
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  int max_depth = 0;  // 0 = unlimited
  int mtry = 0;       // 0 = all features
};

/// Gini CART on 0/1 labels; exhaustive best split over candidate
/// features with midpoint thresholds between sorted distinct values.
/// Leaf value is the positive-class fraction. `rng` is consulted only
/// when mtry selects a per-split feature subset.
Tree build_cart(const Dataset& data, std::span<const std::size_t> indices,
                const CartParams& params, Rng* rng);

enum class SplitGain {
  SumOfSquares,  // first-order: SL^2/nL + SR^2/nR - S^2/n on residuals
  Newton,        // 0.5 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)]
};

struct GradientTreeParams {
  int max_depth = 5;
  int min_samples_leaf = 1;
  SplitGain gain = SplitGain::SumOfSquares;
  double lambda = 0.0;
  double min_child_weight = 0.0;
};

/// Regression tree on per-row residuals with Newton leaf values
/// value = sum(residual) / (sum(hessian) + lambda). `features` limits the
/// candidate columns (empty = all), already sorted ascending.
Tree build_gradient_tree(const Dataset& data, std::span<const double> residual,
                         std::span<const double> hessian,
                         std::span<const std::size_t> indices,
                         std::span<const std::size_t> features,
                         const GradientTreeParams& params);

}  // namespace wildfire
