#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wildfire/models/model.hpp"
#include "wildfire/riskmap.hpp"
#include "wildfire/sampling.hpp"
#include "wildfire/stack.hpp"

namespace wildfire {

struct BandConfig {
  std::string name;
  BandRole role = BandRole::Climatic;
  bool is_static = true;
  std::filesystem::path path;  // static bands
  std::string pattern;         // dynamic bands, "{year}" placeholder
  std::vector<int> years;
  AggregationPolicy aggregation = AggregationPolicy::Mean;
  bool categorical = false;
  std::string impute = "none";  // none | knn | kmeans
  std::vector<std::pair<double, int>> encode;  // optional label encoding
};

struct DeriveConfig {
  enum class Kind { Distance, Density };
  std::string name;
  Kind kind = Kind::Distance;
  std::filesystem::path vector_path;
  BandRole role = BandRole::Anthropogenic;
  double radius = 0.0;  // density only
};

/// Declarative description of one full run, loaded from a TOML file.
struct PipelineConfig {
  std::filesystem::path config_path;
  std::filesystem::path base_dir;  // input paths resolve against this
  std::string raw_text;
  std::string config_hash;  // sha256 of the raw config bytes

  std::uint64_t seed = 0;
  int threads = 0;
  std::filesystem::path out_dir = "out";
  CrsKind crs = CrsKind::Planar;

  std::vector<BandConfig> bands;
  std::vector<DeriveConfig> derived;

  int knn_k = 8;
  int knn_max_radius = 10;
  int kmeans_clusters = 8;

  std::string fire_pattern;
  std::vector<int> fire_years;
  int fire_min_class = 9;
  std::filesystem::path forest_mask;

  int scenario = 1;
  SplitSpec split;
  double ratio = 1.0;
  bool unique_across_years = true;
  YearMode year_mode = YearMode::PerYearAnomaly;

  int nmi_bins = 16;

  std::vector<std::string> run_models{"rf", "gbt", "xgb", "knn"};
  DtHyperparams dt;
  RfHyperparams rf;
  GbtHyperparams gbt;
  XgbHyperparams xgb;
  KnnHyperparams knn;
  SvmHyperparams svm;

  int map_year = 0;
  int map_classes = 5;
  BreakMethod map_method = BreakMethod::Quantile;
};

/// Parses and validates a config; every referenced input file must exist.
PipelineConfig load_config(const std::filesystem::path& path);

/// Hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Executes pipeline stages against an output directory. Each stage
/// loads its inputs from the previous stage's artifacts, so stages can
/// also be run one at a time across separate processes.
class PipelineRunner {
 public:
  struct Overrides {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
  };

  PipelineRunner(PipelineConfig config, const Overrides& overrides = {});

  void run_ingest();
  void run_impute();
  void run_features();
  void run_sample();
  void run_analyze();
  void run_train();
  void run_evaluate();
  void run_map();
  /// All stages in order plus the manifest.
  void run_pipeline();

  void write_manifest() const;

  const PipelineConfig& config() const { return config_; }
  const std::filesystem::path& out_dir() const { return out_; }
  const std::vector<StageTiming>& timings() const { return timings_; }

 private:
  template <typename Fn>
  void timed_stage(const std::string& name, Fn&& fn);

  PipelineConfig config_;
  std::filesystem::path out_;
  std::vector<StageTiming> timings_;
};

}  // namespace wildfire
