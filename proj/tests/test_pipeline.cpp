#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "wildfire/error.hpp"
#include "wildfire/pipeline.hpp"
#include "wildfire/synthetic.hpp"
#include "wildfire/toml.hpp"

using namespace wildfire;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Temp workspace with a small generated fixture.
struct FixtureDir {
  fs::path dir;

  explicit FixtureDir(const std::string& name, int size = 64, int scenario = 1) {
    dir = fs::temp_directory_path() / ("wildfire_test_" + name);
    fs::remove_all(dir);
    SyntheticSpec spec;
    spec.width = size;
    spec.height = size;
    spec.fires_per_year = 60;
    const SyntheticLandscape land = make_synthetic_landscape(spec);
    write_synthetic_fixture(land, dir, scenario, 4242);
  }
  ~FixtureDir() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("toml parser covers the config subset") {
  const std::string text = R"(
# comment
[project]
seed = 42
ratio = 1.5
name = "fire \"quoted\""
flag = true

[[band]]
name = "elev"
years = [2015,
         2016]  # multiline array

[[band]]
name = "slope"

[models.rf]
n_estimators = 100
)";
  const toml::Table root = toml::parse_string(text);
  CHECK(toml::find(root, "project.seed")->as_integer() == 42);
  CHECK(toml::find(root, "project.ratio")->as_double() == 1.5);
  CHECK(toml::find(root, "project.name")->as_string() == "fire \"quoted\"");
  CHECK(toml::find(root, "project.flag")->as_bool());
  CHECK(toml::find(root, "models.rf.n_estimators")->as_integer() == 100);

  const auto& bands = toml::find(root, "band")->as_array();
  REQUIRE(bands.size() == 2);
  CHECK(bands[0].as_table().at("years").as_array().size() == 2);
  CHECK(bands[1].as_table().at("name").as_string() == "slope");

  CHECK(toml::find(root, "missing.key") == nullptr);
  CHECK_THROWS_AS(toml::parse_string("a = "), Error);
  CHECK_THROWS_AS(toml::parse_string("a = 1\na = 2"), Error);
  CHECK_THROWS_AS(toml::parse_string("x = [1, 2"), Error);
}

TEST_CASE("config loader validates keys and files") {
  const FixtureDir fixture("config");

  SUBCASE("the generated config loads") {
    const PipelineConfig cfg = load_config(fixture.dir / "config.toml");
    CHECK(cfg.seed == 4242);
    CHECK(cfg.bands.size() == 6);
    CHECK(cfg.derived.size() == 2);
    CHECK(cfg.fire_years.size() == 8);
    CHECK(cfg.scenario == 1);
    CHECK(cfg.rf.n_estimators == 100);
    CHECK(cfg.gbt.n_estimators == 200);
    CHECK(cfg.gbt.learning_rate == 0.2);
    CHECK(cfg.xgb.colsample_bytree == 0.9);
    CHECK(cfg.xgb.subsample == 0.8);
    CHECK(cfg.knn.n_neighbors == 5);
    CHECK(cfg.svm.c == 1000.0);
    CHECK(cfg.config_hash.size() == 64);
  }

  SUBCASE("missing seed is a config error") {
    const std::string text = slurp(fixture.dir / "config.toml");
    std::ofstream out(fixture.dir / "noseed.toml");
    out << text.substr(text.find('\n', text.find("seed =")) + 1);
    out.close();
    CHECK_THROWS_AS(load_config(fixture.dir / "noseed.toml"), Error);
  }

  SUBCASE("a missing input file names the offending key") {
    std::string text = slurp(fixture.dir / "config.toml");
    const std::string from = "mask = \"forest.asc\"";
    text.replace(text.find(from), from.size(), "mask = \"missing.asc\"");
    std::ofstream out(fixture.dir / "badpath.toml");
    out << text;
    out.close();
    CHECK_THROWS_WITH_AS(load_config(fixture.dir / "badpath.toml"),
                         doctest::Contains("forest.mask"), Error);
  }

  SUBCASE("scenario out of range is a config error") {
    std::string text = slurp(fixture.dir / "config.toml");
    const std::string from = "scenario = 1";
    text.replace(text.find(from), from.size(), "scenario = 4");
    std::ofstream out(fixture.dir / "badscenario.toml");
    out << text;
    out.close();
    CHECK_THROWS_AS(load_config(fixture.dir / "badscenario.toml"), Error);
  }
}

TEST_CASE("pipeline stages chain and rerun deterministically") {
  const FixtureDir fixture("pipeline");
  PipelineConfig cfg = load_config(fixture.dir / "config.toml");
  // keep the unit test quick
  cfg.run_models = {"dt", "gbt"};
  cfg.gbt.n_estimators = 40;

  PipelineRunner::Overrides overrides;
  overrides.out_dir = fixture.dir / "out_pipeline";
  PipelineRunner pipeline(cfg, overrides);
  pipeline.run_pipeline();

  // all artifacts exist
  for (const char* artifact :
       {"ingest/stack.json", "impute/stack.json", "impute/report.json",
        "features/summary.json", "sample/train.csv", "sample/test.csv",
        "sample/provenance.json", "analyze/pearson.csv", "analyze/nmi.csv",
        "analyze/vif.csv", "train/model_dt.json", "train/model_gbt.json",
        "evaluate/metrics.json", "evaluate/metrics.csv", "evaluate/roc_dt.csv",
        "evaluate/roc_gbt.svg", "map/prob_dt.asc", "map/risk_gbt.ppm",
        "map/risk_gbt.png", "map/risk_dt.json", "manifest.json"})
    CHECK_MESSAGE(fs::exists(fixture.dir / "out_pipeline" / artifact),
                  "missing ", artifact);

  // stage-by-stage run matches the single pipeline run byte for byte
  PipelineRunner::Overrides staged_overrides;
  staged_overrides.out_dir = fixture.dir / "out_staged";
  PipelineRunner staged(cfg, staged_overrides);
  staged.run_ingest();
  staged.run_impute();
  staged.run_features();
  staged.run_sample();
  staged.run_analyze();
  staged.run_train();
  staged.run_evaluate();
  staged.run_map();
  CHECK(slurp(fixture.dir / "out_pipeline" / "evaluate" / "metrics.json") ==
        slurp(fixture.dir / "out_staged" / "evaluate" / "metrics.json"));
  CHECK(slurp(fixture.dir / "out_pipeline" / "sample" / "train.csv") ==
        slurp(fixture.dir / "out_staged" / "sample" / "train.csv"));
  CHECK(slurp(fixture.dir / "out_pipeline" / "map" / "risk_gbt.ppm") ==
        slurp(fixture.dir / "out_staged" / "map" / "risk_gbt.ppm"));

  // artifacts are self-describing
  const std::string train_csv = slurp(fixture.dir / "out_pipeline" / "sample" / "train.csv");
  CHECK(train_csv.rfind("# config_hash=" + cfg.config_hash, 0) == 0);
  for (const char* artifact :
       {"evaluate/metrics.json", "train/model_gbt.json", "manifest.json",
        "map/risk_dt.json", "impute/report.json"}) {
    const std::string text = slurp(fixture.dir / "out_pipeline" / artifact);
    CHECK_MESSAGE(text.find(cfg.config_hash) != std::string::npos,
                  artifact, " lacks the config hash");
  }

  // a thread cap must not change any result
  PipelineRunner::Overrides single_overrides;
  single_overrides.out_dir = fixture.dir / "out_single_thread";
  single_overrides.threads = 1;
  PipelineRunner single(cfg, single_overrides);
  single.run_pipeline();
  CHECK(slurp(fixture.dir / "out_pipeline" / "evaluate" / "metrics.json") ==
        slurp(fixture.dir / "out_single_thread" / "evaluate" / "metrics.json"));
  CHECK(slurp(fixture.dir / "out_pipeline" / "train" / "model_gbt.json") ==
        slurp(fixture.dir / "out_single_thread" / "train" / "model_gbt.json"));
  CHECK(slurp(fixture.dir / "out_pipeline" / "map" / "risk_gbt.ppm") ==
        slurp(fixture.dir / "out_single_thread" / "map" / "risk_gbt.ppm"));
}

#ifdef FIREMAP_BINARY
TEST_CASE("firemap CLI: exit codes and stage execution") {
  const FixtureDir fixture("cli");
  const std::string binary = FIREMAP_BINARY;
  const fs::path out = fixture.dir / "out";

  auto run = [&](const std::string& args) {
    const std::string cmd = binary + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };

  // missing config file -> input error (3)
  CHECK(run("ingest --config " + (fixture.dir / "absent.toml").string()) == 3);

  // config without mandatory seed -> config error (2)
  {
    std::string text = slurp(fixture.dir / "config.toml");
    const auto pos = text.find("seed =");
    text = text.substr(0, pos) + text.substr(text.find('\n', pos) + 1);
    std::ofstream f(fixture.dir / "noseed.toml");
    f << text;
  }
  CHECK(run("ingest --config " + (fixture.dir / "noseed.toml").string()) == 2);

  // evaluate before sample/train -> input error (3)
  CHECK(run("evaluate --config " + (fixture.dir / "config.toml").string() +
            " --out " + out.string()) == 3);
}
#endif
