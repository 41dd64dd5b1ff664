#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "wildfire/error.hpp"
#include "wildfire/models/model.hpp"
#include "wildfire/version.hpp"

namespace wildfire {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json tree_to_json(const Tree& tree) {
  json nodes = json::array();
  for (const TreeNode& n : tree.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.gain, n.n});
  return nodes;
}

Tree tree_from_json(const json& j) {
  Tree tree;
  for (const auto& row : j) {
    TreeNode n;
    n.feature = row.at(0).get<int>();
    n.threshold = row.at(1).get<double>();
    n.left = row.at(2).get<int>();
    n.right = row.at(3).get<int>();
    n.value = row.at(4).get<double>();
    n.gain = row.at(5).get<double>();
    n.n = row.at(6).get<std::int64_t>();
    tree.nodes.push_back(n);
  }
  return tree;
}

json scaler_to_json(const Scaler& s) {
  return json{{"mean", s.mean}, {"stddev", s.stddev}};
}

Scaler scaler_from_json(const json& j) {
  Scaler s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("stddev").get<std::vector<double>>();
  return s;
}

json payload_to_json(const Model& model) {
  switch (model.kind()) {
    case ModelKind::DecisionTree: {
      const auto& m = std::get<DecisionTreeModel>(model.payload());
      return json{{"tree", tree_to_json(m.tree)}};
    }
    case ModelKind::RandomForest: {
      const auto& m = std::get<RandomForestModel>(model.payload());
      json trees = json::array();
      for (const Tree& t : m.trees) trees.push_back(tree_to_json(t));
      return json{{"trees", trees}};
    }
    case ModelKind::Gbt:
    case ModelKind::Xgb: {
      const auto& m = std::get<BoostedModel>(model.payload());
      json trees = json::array();
      for (const Tree& t : m.trees) trees.push_back(tree_to_json(t));
      return json{{"base_score", m.base_score},
                  {"learning_rate", m.learning_rate},
                  {"trees", trees}};
    }
    case ModelKind::Knn: {
      const auto& m = std::get<KnnModel>(model.payload());
      return json{{"scaler", scaler_to_json(m.scaler)},
                  {"k", m.k},
                  {"weights", m.weights == KnnHyperparams::Weights::Distance
                                  ? "distance"
                                  : "uniform"},
                  {"cols", m.cols},
                  {"points", m.points},
                  {"labels", m.labels}};
    }
    case ModelKind::Svm: {
      const auto& m = std::get<SvmModel>(model.payload());
      return json{{"scaler", scaler_to_json(m.scaler)},
                  {"gamma", m.gamma},
                  {"bias", m.bias},
                  {"cols", m.cols},
                  {"support_vectors", m.support_vectors},
                  {"alpha_y", m.alpha_y},
                  {"platt_a", m.platt_a},
                  {"platt_b", m.platt_b},
                  {"converged", m.converged}};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "corrupt model kind");
}

Model::Payload payload_from_json(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::DecisionTree:
      return DecisionTreeModel{tree_from_json(j.at("tree"))};
    case ModelKind::RandomForest: {
      RandomForestModel m;
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
      return m;
    }
    case ModelKind::Gbt:
    case ModelKind::Xgb: {
      BoostedModel m;
      m.base_score = j.at("base_score").get<double>();
      m.learning_rate = j.at("learning_rate").get<double>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
      return m;
    }
    case ModelKind::Knn: {
      KnnModel m;
      m.scaler = scaler_from_json(j.at("scaler"));
      m.k = j.at("k").get<int>();
      m.weights = j.at("weights").get<std::string>() == "distance"
                      ? KnnHyperparams::Weights::Distance
                      : KnnHyperparams::Weights::Uniform;
      m.cols = j.at("cols").get<std::size_t>();
      m.points = j.at("points").get<std::vector<double>>();
      m.labels = j.at("labels").get<std::vector<int>>();
      return m;
    }
    case ModelKind::Svm: {
      SvmModel m;
      m.scaler = scaler_from_json(j.at("scaler"));
      m.gamma = j.at("gamma").get<double>();
      m.bias = j.at("bias").get<double>();
      m.cols = j.at("cols").get<std::size_t>();
      m.support_vectors = j.at("support_vectors").get<std::vector<double>>();
      m.alpha_y = j.at("alpha_y").get<std::vector<double>>();
      m.platt_a = j.at("platt_a").get<double>();
      m.platt_b = j.at("platt_b").get<double>();
      m.converged = j.at("converged").get<bool>();
      return m;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "corrupt model kind");
}

}  // namespace

void save_model(const Model& model, std::ostream& out,
                const std::string& config_hash) {
  json doc{{"format", "wildfire-model"},
           {"version", kFormatVersion},
           {"tool_version", kVersion},
           {"kind", model_kind_name(model.kind())},
           {"feature_names", model.feature_names()},
           {"seed", model.seed()},
           {"payload", payload_to_json(model)}};
  if (!config_hash.empty()) doc["config_hash"] = config_hash;
  out << doc.dump(1) << "\n";
  if (!out) throw Error(ErrorCode::IoFailure, "model write failed");
}

void save_model(const Model& model, const std::filesystem::path& path,
                const std::string& config_hash) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for write");
  save_model(model, out, config_hash);
}

Model load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "wildfire-model")
      throw Error(ErrorCode::MalformedJson, "not a model file");
    if (doc.at("version").get<int>() != kFormatVersion)
      throw Error(ErrorCode::MalformedJson, "unsupported model format version");
    const ModelKind kind = model_kind_from_name(doc.at("kind").get<std::string>());
    return Model(kind, doc.at("feature_names").get<std::vector<std::string>>(),
                 doc.at("seed").get<std::uint64_t>(),
                 payload_from_json(kind, doc.at("payload")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return load_model(in);
}

}  // namespace wildfire
