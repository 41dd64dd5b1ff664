#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wildfire/models/scaler.hpp"
#include "wildfire/models/tree.hpp"
#include "wildfire/sample_set.hpp"

namespace wildfire {

// Hyperparameter records; defaults follow the reference configuration.

struct DtHyperparams {
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  int max_depth = 0;  // 0 = unlimited
};

struct RfHyperparams {
  int n_estimators = 100;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  bool bootstrap = true;
  int mtry = 0;  // 0 = floor(sqrt(p))
};

struct GbtHyperparams {
  int n_estimators = 200;
  int max_depth = 5;
  double learning_rate = 0.2;
};

struct XgbHyperparams {
  int n_estimators = 200;
  int max_depth = 5;
  double learning_rate = 0.2;
  double subsample = 0.8;
  double colsample_bytree = 0.9;
  double lambda = 1.0;
  double min_child_weight = 0.0;
};

struct KnnHyperparams {
  enum class Weights { Uniform, Distance };
  int n_neighbors = 5;
  Weights weights = Weights::Distance;
};

struct SvmHyperparams {
  double c = 1000.0;
  double gamma = 0.0;  // 0 = auto (1 / feature count)
  bool probability = true;
  double tol = 1e-3;
  int max_passes = 5;
  std::int64_t max_iter = 1000;  // full SMO sweeps before giving up
};

enum class ModelKind { DecisionTree, RandomForest, Gbt, Xgb, Knn, Svm };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

struct DecisionTreeModel {
  Tree tree;
};

struct RandomForestModel {
  std::vector<Tree> trees;
};

/// Additive log-odds model shared by the two boosting trainers.
struct BoostedModel {
  double base_score = 0.0;  // log-odds of the class prior
  double learning_rate = 0.2;
  std::vector<Tree> trees;
};

struct KnnModel {
  Scaler scaler;
  int k = 5;
  KnnHyperparams::Weights weights = KnnHyperparams::Weights::Distance;
  std::size_t cols = 0;
  std::vector<double> points;  // scaled, row-major
  std::vector<int> labels;
};

struct SvmModel {
  Scaler scaler;
  double gamma = 0.0;
  double bias = 0.0;
  std::size_t cols = 0;
  std::vector<double> support_vectors;  // scaled, row-major
  std::vector<double> alpha_y;          // alpha_i * y_i, y in {-1, +1}
  double platt_a = 1.0;
  double platt_b = 0.0;
  bool converged = true;

  double decision_value(std::span<const double> raw_features) const;
};

struct ImportanceVector {
  std::vector<std::string> names;
  std::vector<double> weights;  // nonnegative, sums to 1 when any split exists
};

/// A trained classifier of any of the six families plus its metadata.
class Model {
 public:
  using Payload = std::variant<DecisionTreeModel, RandomForestModel, BoostedModel,
                               KnnModel, SvmModel>;

  Model() = default;
  Model(ModelKind kind, std::vector<std::string> feature_names, std::uint64_t seed,
        Payload payload)
      : kind_(kind), feature_names_(std::move(feature_names)), seed_(seed),
        payload_(std::move(payload)) {}

  ModelKind kind() const { return kind_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::uint64_t seed() const { return seed_; }
  const Payload& payload() const { return payload_; }

  /// Fire probability in [0, 1]; the hard label is probability >= 0.5.
  double predict_proba(std::span<const double> features) const;

  /// Split-based importances for the tree families; KNN and SVM have none.
  ImportanceVector feature_importance() const;

 private:
  ModelKind kind_ = ModelKind::DecisionTree;
  std::vector<std::string> feature_names_;
  std::uint64_t seed_ = 0;
  Payload payload_;
};

Model train_decision_tree(const SampleSet& data, const DtHyperparams& hp = {});
Model train_random_forest(const SampleSet& data, const RfHyperparams& hp,
                          std::uint64_t seed);
Model train_gbt(const SampleSet& data, const GbtHyperparams& hp, std::uint64_t seed);
Model train_xgb(const SampleSet& data, const XgbHyperparams& hp, std::uint64_t seed);
Model train_knn(const SampleSet& data, const KnnHyperparams& hp = {});
Model train_svm_rbf(const SampleSet& data, const SvmHyperparams& hp,
                    std::uint64_t seed);

/// Versioned JSON serialization; round-trips preserve predictions
/// bit-for-bit. `config_hash`, when given, is embedded so the artifact
/// names the run that produced it.
void save_model(const Model& model, std::ostream& out,
                const std::string& config_hash = "");
void save_model(const Model& model, const std::filesystem::path& path,
                const std::string& config_hash = "");
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

}  // namespace wildfire
