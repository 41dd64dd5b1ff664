// firemap: wildfire-susceptibility pipeline CLI. Stages read the previous
// stage's artifacts from the output directory, so they can run one at a
// time or all at once via `pipeline`.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wildfire/error.hpp"
#include "wildfire/pipeline.hpp"
#include "wildfire/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Pipeline config (TOML)")
      ->required();
  cmd->add_option("--out", args.out_dir, "Output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "RNG seed (overrides config)");
  cmd->add_option("--threads", args.threads,
                  "Worker thread cap (0 = machine parallelism)");
}

int run_stage(const CommonArgs& args, const std::string& stage) {
  using namespace wildfire;
  try {
    PipelineConfig config = load_config(args.config_path);
    PipelineRunner::Overrides overrides;
    if (!args.out_dir.empty()) overrides.out_dir = args.out_dir;
    if (args.seed >= 0) overrides.seed = std::uint64_t(args.seed);
    if (args.threads > 0) overrides.threads = args.threads;
    PipelineRunner runner(std::move(config), overrides);

    if (stage == "ingest")
      runner.run_ingest();
    else if (stage == "impute")
      runner.run_impute();
    else if (stage == "features")
      runner.run_features();
    else if (stage == "sample")
      runner.run_sample();
    else if (stage == "analyze")
      runner.run_analyze();
    else if (stage == "train")
      runner.run_train();
    else if (stage == "evaluate")
      runner.run_evaluate();
    else if (stage == "map")
      runner.run_map();
    else
      runner.run_pipeline();

    for (const StageTiming& t : runner.timings())
      std::cerr << "[firemap] " << t.stage << ": " << t.seconds << " s\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "firemap: " << e.what() << "\n";
    switch (classify_error(e.code())) {
      case ErrorClass::Config: return 2;
      case ErrorClass::Input: return 3;
      case ErrorClass::Numeric: return 4;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "firemap: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wildfire susceptibility mapping pipeline"};
  app.set_version_flag("--version", wildfire::kVersion);
  app.require_subcommand(1);

  static const char* const kStages[] = {"ingest",  "impute",   "features",
                                        "analyze", "sample",   "train",
                                        "evaluate", "map",     "pipeline"};
  static const char* const kHelp[] = {
      "Read rasters/vectors, align frames, derive distance and density bands",
      "Fill nodata cells (KNN or K-means) in bands marked for imputation",
      "Materialize temporal aggregates and per-year anomaly grids",
      "Feature diagnostics: Pearson matrix, NMI scores, VIF scores",
      "Build scenario train/test sample sets and attach feature values",
      "Train the configured classifiers",
      "Score the test set: metrics JSON/CSV, ROC curves (CSV + SVG)",
      "Predict probability grids, cut 5-class risk maps, render images",
      "Run every stage in order and write the reproducibility manifest"};

  CommonArgs args[std::size(kStages)];
  for (std::size_t i = 0; i < std::size(kStages); ++i)
    add_common(app.add_subcommand(kStages[i], kHelp[i]), args[i]);

  CLI11_PARSE(app, argc, argv);
  for (std::size_t i = 0; i < std::size(kStages); ++i)
    if (app.get_subcommand(kStages[i])->parsed()) return run_stage(args[i], kStages[i]);
  return 1;
}
