#include "wildfire/models/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wildfire/error.hpp"
#include "wildfire/parallel.hpp"

namespace wildfire {

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::DecisionTree: return "dt";
    case ModelKind::RandomForest: return "rf";
    case ModelKind::Gbt: return "gbt";
    case ModelKind::Xgb: return "xgb";
    case ModelKind::Knn: return "knn";
    case ModelKind::Svm: return "svm";
  }
  return "unknown";
}

ModelKind model_kind_from_name(const std::string& name) {
  for (ModelKind kind : {ModelKind::DecisionTree, ModelKind::RandomForest,
                         ModelKind::Gbt, ModelKind::Xgb, ModelKind::Knn,
                         ModelKind::Svm})
    if (name == model_kind_name(kind)) return kind;
  throw Error(ErrorCode::InvalidArgument, "unknown model kind '" + name + "'");
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

double clamp_prior(double p) { return std::clamp(p, 1e-6, 1.0 - 1e-6); }

void require_nonempty(const SampleSet& data) {
  if (data.samples.empty()) throw Error(ErrorCode::EmptyData, "no training samples");
  if (data.feature_names.empty())
    throw Error(ErrorCode::EmptyData, "no feature columns");
}

double boosted_raw_score(const BoostedModel& m, std::span<const double> features) {
  double f = m.base_score;
  for (const Tree& tree : m.trees) f += m.learning_rate * tree.predict(features);
  return f;
}

}  // namespace

double Model::predict_proba(std::span<const double> features) const {
  if (features.size() != feature_names_.size())
    throw Error(ErrorCode::FeatureMismatch,
                "expected " + std::to_string(feature_names_.size()) +
                    " features, got " + std::to_string(features.size()));

  switch (kind_) {
    case ModelKind::DecisionTree:
      return std::get<DecisionTreeModel>(payload_).tree.predict(features);
    case ModelKind::RandomForest: {
      const auto& forest = std::get<RandomForestModel>(payload_);
      double sum = 0.0;
      for (const Tree& tree : forest.trees) sum += tree.predict(features);
      return sum / double(forest.trees.size());
    }
    case ModelKind::Gbt:
    case ModelKind::Xgb:
      return sigmoid(boosted_raw_score(std::get<BoostedModel>(payload_), features));
    case ModelKind::Knn: {
      const auto& knn = std::get<KnnModel>(payload_);
      const auto q = knn.scaler.apply(features);
      const std::size_t n = knn.labels.size();
      std::vector<std::pair<double, std::size_t>> d2(n);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < knn.cols; ++j) {
          const double d = q[j] - knn.points[i * knn.cols + j];
          acc += d * d;
        }
        d2[i] = {acc, i};
      }
      // Exact matches short-circuit to the mean label among them.
      std::size_t exact = 0;
      double exact_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i].first == 0.0) {
          ++exact;
          exact_sum += knn.labels[i];
        }
      }
      if (exact > 0) return exact_sum / double(exact);

      const std::size_t k = std::min<std::size_t>(std::size_t(knn.k), n);
      std::partial_sort(d2.begin(), d2.begin() + std::ptrdiff_t(k), d2.end());

      double wsum = 0.0, wlabel = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double w = knn.weights == KnnHyperparams::Weights::Distance
                             ? 1.0 / std::sqrt(d2[i].first)
                             : 1.0;
        wsum += w;
        wlabel += w * knn.labels[d2[i].second];
      }
      return wlabel / wsum;
    }
    case ModelKind::Svm: {
      const auto& svm = std::get<SvmModel>(payload_);
      const double f = svm.decision_value(features);
      return sigmoid(svm.platt_a * f + svm.platt_b);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "corrupt model kind");
}

double SvmModel::decision_value(std::span<const double> raw_features) const {
  const auto q = scaler.apply(raw_features);
  const std::size_t m = alpha_y.size();
  double f = bias;
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double d = q[j] - support_vectors[i * cols + j];
      acc += d * d;
    }
    f += alpha_y[i] * std::exp(-gamma * acc);
  }
  return f;
}

ImportanceVector Model::feature_importance() const {
  const std::vector<Tree>* trees = nullptr;
  std::vector<Tree> single;
  switch (kind_) {
    case ModelKind::DecisionTree:
      single.push_back(std::get<DecisionTreeModel>(payload_).tree);
      trees = &single;
      break;
    case ModelKind::RandomForest:
      trees = &std::get<RandomForestModel>(payload_).trees;
      break;
    case ModelKind::Gbt:
    case ModelKind::Xgb:
      trees = &std::get<BoostedModel>(payload_).trees;
      break;
    case ModelKind::Knn:
    case ModelKind::Svm:
      throw Error(ErrorCode::NotSupported,
                  "importance is defined for tree models only");
  }

  ImportanceVector out;
  out.names = feature_names_;
  out.weights.assign(feature_names_.size(), 0.0);
  for (const Tree& tree : *trees)
    for (const TreeNode& node : tree.nodes)
      if (!node.is_leaf()) out.weights[std::size_t(node.feature)] += node.gain;
  for (double& w : out.weights) w /= double(trees->size());

  const double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  if (total > 0.0)
    for (double& w : out.weights) w /= total;
  return out;
}

Model train_decision_tree(const SampleSet& data, const DtHyperparams& hp) {
  require_nonempty(data);
  if (hp.min_samples_split < 2 || hp.min_samples_leaf < 1)
    throw Error(ErrorCode::InvalidArgument, "bad decision-tree hyperparameters");
  const Dataset ds = Dataset::from_samples(data);
  std::vector<std::size_t> indices(ds.rows);
  std::iota(indices.begin(), indices.end(), 0);
  CartParams params{hp.min_samples_split, hp.min_samples_leaf, hp.max_depth, 0};
  DecisionTreeModel payload{build_cart(ds, indices, params, nullptr)};
  return Model(ModelKind::DecisionTree, data.feature_names, 0, std::move(payload));
}

Model train_random_forest(const SampleSet& data, const RfHyperparams& hp,
                          std::uint64_t seed) {
  require_nonempty(data);
  if (hp.n_estimators < 1 || hp.min_samples_split < 2 || hp.min_samples_leaf < 1)
    throw Error(ErrorCode::InvalidArgument, "bad random-forest hyperparameters");
  const Dataset ds = Dataset::from_samples(data);
  const int mtry = hp.mtry > 0
                       ? hp.mtry
                       : std::max(1, int(std::floor(std::sqrt(double(ds.cols)))));
  CartParams params{hp.min_samples_split, hp.min_samples_leaf, 0, mtry};

  RandomForestModel forest;
  forest.trees.resize(std::size_t(hp.n_estimators));
  const std::uint64_t forest_seed = stage_seed(seed, "random-forest");
  parallel_for(0, hp.n_estimators, [&](std::int64_t t) {
    Rng rng(item_seed(forest_seed, std::uint64_t(t)));
    std::vector<std::size_t> indices(ds.rows);
    if (hp.bootstrap) {
      for (std::size_t i = 0; i < ds.rows; ++i)
        indices[i] = std::size_t(rng.below(ds.rows));
    } else {
      std::iota(indices.begin(), indices.end(), 0);
    }
    forest.trees[std::size_t(t)] = build_cart(ds, indices, params, &rng);
  });
  return Model(ModelKind::RandomForest, data.feature_names, seed, std::move(forest));
}

Model train_gbt(const SampleSet& data, const GbtHyperparams& hp, std::uint64_t seed) {
  require_nonempty(data);
  if (hp.n_estimators < 1 || hp.max_depth < 1 || hp.learning_rate < 0.0)
    throw Error(ErrorCode::InvalidArgument, "bad gbt hyperparameters");
  const Dataset ds = Dataset::from_samples(data);
  const double prior =
      clamp_prior(std::accumulate(ds.y.begin(), ds.y.end(), 0.0) / double(ds.rows));

  BoostedModel model;
  model.base_score = logit(prior);
  model.learning_rate = hp.learning_rate;

  std::vector<std::size_t> indices(ds.rows);
  std::iota(indices.begin(), indices.end(), 0);
  std::vector<double> f(ds.rows, model.base_score);
  std::vector<double> residual(ds.rows), hessian(ds.rows);
  GradientTreeParams params;
  params.max_depth = hp.max_depth;
  params.gain = SplitGain::SumOfSquares;

  for (int m = 0; m < hp.n_estimators; ++m) {
    for (std::size_t i = 0; i < ds.rows; ++i) {
      const double p = sigmoid(f[i]);
      residual[i] = ds.y[i] - p;  // negative gradient of logistic loss
      hessian[i] = p * (1.0 - p);
    }
    Tree tree = build_gradient_tree(ds, residual, hessian, indices, {}, params);
    for (std::size_t i = 0; i < ds.rows; ++i)
      f[i] += hp.learning_rate * tree.predict(ds.row(i));
    model.trees.push_back(std::move(tree));
  }
  return Model(ModelKind::Gbt, data.feature_names, seed, std::move(model));
}

Model train_xgb(const SampleSet& data, const XgbHyperparams& hp, std::uint64_t seed) {
  require_nonempty(data);
  if (hp.n_estimators < 1 || hp.max_depth < 1 || hp.learning_rate < 0.0 ||
      hp.subsample <= 0.0 || hp.subsample > 1.0 || hp.colsample_bytree <= 0.0 ||
      hp.colsample_bytree > 1.0 || hp.lambda < 0.0)
    throw Error(ErrorCode::InvalidArgument, "bad xgb hyperparameters");
  const Dataset ds = Dataset::from_samples(data);
  const double prior =
      clamp_prior(std::accumulate(ds.y.begin(), ds.y.end(), 0.0) / double(ds.rows));

  BoostedModel model;
  model.base_score = logit(prior);
  model.learning_rate = hp.learning_rate;

  std::vector<double> f(ds.rows, model.base_score);
  std::vector<double> residual(ds.rows), hessian(ds.rows);
  GradientTreeParams params;
  params.max_depth = hp.max_depth;
  params.gain = SplitGain::Newton;
  params.lambda = hp.lambda;
  params.min_child_weight = hp.min_child_weight;

  const std::uint64_t xgb_seed = stage_seed(seed, "xgb");
  const std::size_t n_rows =
      std::max<std::size_t>(1, std::size_t(std::llround(hp.subsample * double(ds.rows))));
  const std::size_t n_cols = std::max<std::size_t>(
      1, std::size_t(std::llround(hp.colsample_bytree * double(ds.cols))));

  for (int m = 0; m < hp.n_estimators; ++m) {
    for (std::size_t i = 0; i < ds.rows; ++i) {
      const double p = sigmoid(f[i]);
      residual[i] = ds.y[i] - p;
      hessian[i] = p * (1.0 - p);
    }

    Rng rng(item_seed(xgb_seed, std::uint64_t(m)));
    // Row then column subsampling, each without replacement.
    std::vector<std::size_t> rows(ds.rows);
    std::iota(rows.begin(), rows.end(), 0);
    if (n_rows < ds.rows) {
      for (std::size_t i = 0; i < n_rows; ++i) {
        const std::size_t j = i + std::size_t(rng.below(ds.rows - i));
        std::swap(rows[i], rows[j]);
      }
      rows.resize(n_rows);
      std::sort(rows.begin(), rows.end());
    }
    std::vector<std::size_t> cols(ds.cols);
    std::iota(cols.begin(), cols.end(), 0);
    if (n_cols < ds.cols) {
      for (std::size_t i = 0; i < n_cols; ++i) {
        const std::size_t j = i + std::size_t(rng.below(ds.cols - i));
        std::swap(cols[i], cols[j]);
      }
      cols.resize(n_cols);
      std::sort(cols.begin(), cols.end());
    }

    Tree tree = build_gradient_tree(ds, residual, hessian, rows, cols, params);
    for (std::size_t i = 0; i < ds.rows; ++i)
      f[i] += hp.learning_rate * tree.predict(ds.row(i));
    model.trees.push_back(std::move(tree));
  }
  return Model(ModelKind::Xgb, data.feature_names, seed, std::move(model));
}

Model train_knn(const SampleSet& data, const KnnHyperparams& hp) {
  require_nonempty(data);
  if (hp.n_neighbors < 1)
    throw Error(ErrorCode::InvalidArgument, "n_neighbors must be >= 1");
  if (std::int64_t(data.size()) < hp.n_neighbors)
    throw Error(ErrorCode::TooFewSamples, "need at least k samples");

  KnnModel model;
  model.scaler = fit_scaler(data);
  model.k = hp.n_neighbors;
  model.weights = hp.weights;
  model.cols = data.feature_names.size();
  model.points.reserve(data.size() * model.cols);
  model.labels.reserve(data.size());
  for (const auto& s : data.samples) {
    const auto scaled = model.scaler.apply(s.features);
    model.points.insert(model.points.end(), scaled.begin(), scaled.end());
    model.labels.push_back(s.label);
  }
  return Model(ModelKind::Knn, data.feature_names, 0, std::move(model));
}

}  // namespace wildfire
