#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "wildfire/error.hpp"
#include "wildfire/pipeline.hpp"
#include "wildfire/toml.hpp"

namespace wildfire {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoFailure, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(std::size_t(len) * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

namespace {

using toml::Table;
using toml::Value;

[[noreturn]] void config_fail(const std::string& message) {
  throw Error(ErrorCode::ConfigError, message);
}

const Value& require(const Table& t, const std::string& path) {
  const Value* v = toml::find(t, path);
  if (v == nullptr) config_fail("missing config key '" + path + "'");
  return *v;
}

std::string get_string(const Table& t, const std::string& path,
                       const std::string& fallback) {
  const Value* v = toml::find(t, path);
  return v ? v->as_string() : fallback;
}

std::int64_t get_int(const Table& t, const std::string& path, std::int64_t fallback) {
  const Value* v = toml::find(t, path);
  return v ? v->as_integer() : fallback;
}

double get_double(const Table& t, const std::string& path, double fallback) {
  const Value* v = toml::find(t, path);
  return v ? v->as_double() : fallback;
}

bool get_bool(const Table& t, const std::string& path, bool fallback) {
  const Value* v = toml::find(t, path);
  return v ? v->as_bool() : fallback;
}

std::vector<int> get_year_list(const Value& v, const std::string& key) {
  std::vector<int> years;
  for (const Value& item : v.as_array()) years.push_back(int(item.as_integer()));
  if (years.empty()) config_fail("'" + key + "' must list at least one year");
  std::set<int> unique(years.begin(), years.end());
  if (unique.size() != years.size()) config_fail("'" + key + "' has duplicate years");
  return years;
}

BandRole parse_role(const std::string& s, const std::string& key) {
  if (s == "topographic") return BandRole::Topographic;
  if (s == "vegetation") return BandRole::Vegetation;
  if (s == "climatic") return BandRole::Climatic;
  if (s == "anthropogenic") return BandRole::Anthropogenic;
  if (s == "target") return BandRole::Target;
  config_fail("'" + key + "': unknown role '" + s + "'");
}

void check_file(const std::filesystem::path& path, const std::string& key) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::IoFailure,
                "config key '" + key + "': file '" + path.string() + "' not found");
}

std::string pattern_for_year(const std::string& pattern, int year,
                             const std::string& key) {
  const std::string token = "{year}";
  const std::size_t pos = pattern.find(token);
  if (pos == std::string::npos)
    config_fail("'" + key + "': pattern must contain {year}");
  std::string out = pattern;
  out.replace(pos, token.size(), std::to_string(year));
  return out;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  PipelineConfig cfg;
  cfg.config_path = path;
  cfg.base_dir = path.has_parent_path() ? path.parent_path()
                                        : std::filesystem::path(".");
  cfg.raw_text = buf.str();
  cfg.config_hash = sha256_hex(cfg.raw_text);

  const Table root = toml::parse_string(cfg.raw_text);

  // [project]
  const Value* seed = toml::find(root, "project.seed");
  if (seed == nullptr) config_fail("missing mandatory key 'project.seed'");
  cfg.seed = std::uint64_t(seed->as_integer());
  cfg.threads = int(get_int(root, "project.threads", 0));
  cfg.out_dir = get_string(root, "project.out_dir", "out");

  // [grids]
  const std::string crs = get_string(root, "grids.crs", "planar");
  if (crs == "planar")
    cfg.crs = CrsKind::Planar;
  else if (crs == "geographic")
    cfg.crs = CrsKind::Geographic;
  else
    config_fail("grids.crs must be 'planar' or 'geographic'");

  // [fire]
  cfg.fire_pattern = require(root, "fire.pattern").as_string();
  cfg.fire_years = get_year_list(require(root, "fire.years"), "fire.years");
  cfg.fire_min_class = int(get_int(root, "fire.min_class", 9));
  for (int year : cfg.fire_years)
    check_file(cfg.base_dir / pattern_for_year(cfg.fire_pattern, year, "fire.pattern"),
               "fire.pattern");

  // [forest]
  cfg.forest_mask = cfg.base_dir / require(root, "forest.mask").as_string();
  check_file(cfg.forest_mask, "forest.mask");

  // [[band]]
  const Value* bands = toml::find(root, "band");
  if (bands == nullptr || bands->as_array().empty())
    config_fail("at least one [[band]] is required");
  std::set<std::string> names;
  for (const Value& item : bands->as_array()) {
    const Table& t = item.as_table();
    BandConfig band;
    band.name = require(t, "name").as_string();
    if (!names.insert(band.name).second)
      config_fail("duplicate band name '" + band.name + "'");
    band.role = parse_role(get_string(t, "role", "climatic"), "band.role");
    const std::string kind = get_string(t, "kind", "static");
    band.is_static = kind == "static";
    if (!band.is_static && kind != "dynamic")
      config_fail("band '" + band.name + "': kind must be static or dynamic");
    band.categorical = get_bool(t, "categorical", false);
    band.impute = get_string(t, "impute", "none");
    if (band.impute != "none" && band.impute != "knn" && band.impute != "kmeans")
      config_fail("band '" + band.name + "': impute must be none, knn or kmeans");
    const std::string agg = get_string(t, "aggregation", "mean");
    if (agg == "mean")
      band.aggregation = AggregationPolicy::Mean;
    else if (agg == "median")
      band.aggregation = AggregationPolicy::Median;
    else
      config_fail("band '" + band.name + "': aggregation must be mean or median");

    if (band.is_static) {
      band.path = cfg.base_dir / require(t, "path").as_string();
      check_file(band.path, "band." + band.name + ".path");
    } else {
      band.pattern = require(t, "pattern").as_string();
      const Value* years = toml::find(t, "years");
      band.years = years ? get_year_list(*years, "band." + band.name + ".years")
                         : cfg.fire_years;
      for (int year : band.years)
        check_file(cfg.base_dir /
                       pattern_for_year(band.pattern, year, "band." + band.name),
                   "band." + band.name + ".pattern");
    }
    if (const Value* encode = toml::find(t, "encode")) {
      for (const Value& pair : encode->as_array()) {
        const auto& arr = pair.as_array();
        if (arr.size() != 2)
          config_fail("band '" + band.name + "': encode entries are [raw, code]");
        band.encode.emplace_back(arr[0].as_double(), int(arr[1].as_integer()));
      }
    }
    cfg.bands.push_back(std::move(band));
  }

  // [[derive]]
  if (const Value* derive = toml::find(root, "derive")) {
    for (const Value& item : derive->as_array()) {
      const Table& t = item.as_table();
      DeriveConfig d;
      d.name = require(t, "name").as_string();
      if (!names.insert(d.name).second)
        config_fail("duplicate band name '" + d.name + "'");
      const std::string kind = require(t, "kind").as_string();
      if (kind == "distance")
        d.kind = DeriveConfig::Kind::Distance;
      else if (kind == "density")
        d.kind = DeriveConfig::Kind::Density;
      else
        config_fail("derive '" + d.name + "': kind must be distance or density");
      d.vector_path = cfg.base_dir / require(t, "vector").as_string();
      check_file(d.vector_path, "derive." + d.name + ".vector");
      d.role = parse_role(get_string(t, "role", "anthropogenic"), "derive.role");
      d.radius = get_double(t, "radius", 0.0);
      if (d.kind == DeriveConfig::Kind::Density && !(d.radius > 0.0))
        config_fail("derive '" + d.name + "': density needs radius > 0");
      cfg.derived.push_back(std::move(d));
    }
  }

  // [impute]
  cfg.knn_k = int(get_int(root, "impute.knn_k", 8));
  cfg.knn_max_radius = int(get_int(root, "impute.knn_max_radius", 10));
  cfg.kmeans_clusters = int(get_int(root, "impute.kmeans_clusters", 8));

  // [sampling]
  cfg.scenario = int(get_int(root, "sampling.scenario", 1));
  if (cfg.scenario < 1 || cfg.scenario > 3)
    config_fail("sampling.scenario must be 1, 2 or 3");
  if (const Value* v = toml::find(root, "sampling.train_years")) {
    const auto years = get_year_list(*v, "sampling.train_years");
    cfg.split.train_years = std::set<int>(years.begin(), years.end());
  }
  if (const Value* v = toml::find(root, "sampling.test_years")) {
    const auto years = get_year_list(*v, "sampling.test_years");
    cfg.split.test_years = std::set<int>(years.begin(), years.end());
  }
  cfg.split.buffer_km =
      get_double(root, "sampling.buffer_km", cfg.scenario == 2 ? 25.0 : 0.0);
  cfg.ratio = get_double(root, "sampling.ratio", 1.0);
  cfg.unique_across_years = get_bool(root, "sampling.unique_across_years", true);
  const std::string mode = get_string(root, "sampling.year_mode", "anomaly");
  if (mode == "anomaly")
    cfg.year_mode = YearMode::PerYearAnomaly;
  else if (mode == "aggregated")
    cfg.year_mode = YearMode::AggregatedStatic;
  else
    config_fail("sampling.year_mode must be anomaly or aggregated");

  // [analysis]
  cfg.nmi_bins = int(get_int(root, "analysis.nmi_bins", 16));

  // [models]
  if (const Value* run = toml::find(root, "models.run")) {
    cfg.run_models.clear();
    for (const Value& v : run->as_array()) {
      const std::string name = v.as_string();
      model_kind_from_name(name);  // validates
      cfg.run_models.push_back(name);
    }
    if (cfg.run_models.empty()) config_fail("models.run must not be empty");
  }
  cfg.dt.min_samples_split = int(get_int(root, "models.dt.min_samples_split", 2));
  cfg.dt.min_samples_leaf = int(get_int(root, "models.dt.min_samples_leaf", 1));
  cfg.dt.max_depth = int(get_int(root, "models.dt.max_depth", 0));
  cfg.rf.n_estimators = int(get_int(root, "models.rf.n_estimators", 100));
  cfg.rf.min_samples_split = int(get_int(root, "models.rf.min_samples_split", 2));
  cfg.rf.min_samples_leaf = int(get_int(root, "models.rf.min_samples_leaf", 1));
  cfg.rf.bootstrap = get_bool(root, "models.rf.bootstrap", true);
  cfg.rf.mtry = int(get_int(root, "models.rf.mtry", 0));
  cfg.gbt.n_estimators = int(get_int(root, "models.gbt.n_estimators", 200));
  cfg.gbt.max_depth = int(get_int(root, "models.gbt.max_depth", 5));
  cfg.gbt.learning_rate = get_double(root, "models.gbt.learning_rate", 0.2);
  cfg.xgb.n_estimators = int(get_int(root, "models.xgb.n_estimators", 200));
  cfg.xgb.max_depth = int(get_int(root, "models.xgb.max_depth", 5));
  cfg.xgb.learning_rate = get_double(root, "models.xgb.learning_rate", 0.2);
  cfg.xgb.subsample = get_double(root, "models.xgb.subsample", 0.8);
  cfg.xgb.colsample_bytree = get_double(root, "models.xgb.colsample_bytree", 0.9);
  cfg.xgb.lambda = get_double(root, "models.xgb.lambda", 1.0);
  cfg.xgb.min_child_weight = get_double(root, "models.xgb.min_child_weight", 0.0);
  cfg.knn.n_neighbors = int(get_int(root, "models.knn.n_neighbors", 5));
  cfg.knn.weights = get_string(root, "models.knn.weights", "distance") == "uniform"
                        ? KnnHyperparams::Weights::Uniform
                        : KnnHyperparams::Weights::Distance;
  cfg.svm.c = get_double(root, "models.svm.c", 1000.0);
  cfg.svm.gamma = get_double(root, "models.svm.gamma", 0.0);
  cfg.svm.tol = get_double(root, "models.svm.tol", 1e-3);
  cfg.svm.max_passes = int(get_int(root, "models.svm.max_passes", 5));
  cfg.svm.max_iter = get_int(root, "models.svm.max_iter", 1000);

  // [map]
  cfg.map_year = int(get_int(root, "map.year", cfg.fire_years.back()));
  cfg.map_classes = int(get_int(root, "map.classes", 5));
  const std::string method = get_string(root, "map.method", "quantile");
  if (method == "quantile")
    cfg.map_method = BreakMethod::Quantile;
  else if (method == "jenks")
    cfg.map_method = BreakMethod::Jenks;
  else
    config_fail("map.method must be quantile or jenks");

  for (int y : cfg.split.train_years)
    if (cfg.split.test_years.count(y))
      config_fail("sampling.train_years and test_years overlap");

  return cfg;
}

}  // namespace wildfire
