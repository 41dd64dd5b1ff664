#include "wildfire/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "wildfire/ascii_grid.hpp"
#include "wildfire/distance.hpp"
#include "wildfire/error.hpp"
#include "wildfire/evaluation.hpp"
#include "wildfire/feature_analysis.hpp"
#include "wildfire/impute.hpp"
#include "wildfire/label_encode.hpp"
#include "wildfire/parallel.hpp"
#include "wildfire/rng.hpp"
#include "wildfire/temporal.hpp"
#include "wildfire/vector_layer.hpp"
#include "wildfire/version.hpp"

namespace wildfire {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* role_name(BandRole role) {
  switch (role) {
    case BandRole::Topographic: return "topographic";
    case BandRole::Vegetation: return "vegetation";
    case BandRole::Climatic: return "climatic";
    case BandRole::Anthropogenic: return "anthropogenic";
    case BandRole::Target: return "target";
  }
  return "climatic";
}

BandRole role_from_name(const std::string& s) {
  for (BandRole role : {BandRole::Topographic, BandRole::Vegetation,
                        BandRole::Climatic, BandRole::Anthropogenic, BandRole::Target})
    if (s == role_name(role)) return role;
  throw Error(ErrorCode::MalformedJson, "unknown band role '" + s + "'");
}

/// Band -> grid-file map carried between stages as <stage>/stack.json.
struct StageStack {
  struct Entry {
    std::string name;
    BandRole role = BandRole::Climatic;
    bool is_static = true;
    AggregationPolicy aggregation = AggregationPolicy::Mean;
    bool categorical = false;
    std::string impute = "none";
    std::string file;                  // static band, relative to out dir
    std::map<int, std::string> files;  // dynamic band
  };
  std::vector<Entry> entries;
  std::map<int, std::string> fire_files;
  int fire_min_class = 9;
  std::string forest_file;
};

void write_stage_json(const fs::path& out, const std::string& stage,
                      const StageStack& stack, const std::string& config_hash) {
  json bands = json::array();
  for (const auto& e : stack.entries) {
    json b{{"name", e.name},
           {"role", role_name(e.role)},
           {"kind", e.is_static ? "static" : "dynamic"},
           {"aggregation",
            e.aggregation == AggregationPolicy::Mean ? "mean" : "median"},
           {"categorical", e.categorical},
           {"impute", e.impute}};
    if (e.is_static) {
      b["file"] = e.file;
    } else {
      json files = json::object();
      for (const auto& [year, file] : e.files) files[std::to_string(year)] = file;
      b["files"] = files;
    }
    bands.push_back(std::move(b));
  }
  json fire_files = json::object();
  for (const auto& [year, file] : stack.fire_files)
    fire_files[std::to_string(year)] = file;
  json doc{{"config_hash", config_hash},
           {"bands", bands},
           {"fire", {{"min_class", stack.fire_min_class}, {"files", fire_files}}},
           {"forest", stack.forest_file}};
  std::ofstream f(out / stage / "stack.json");
  if (!f)
    throw Error(ErrorCode::IoFailure, "cannot write " + stage + "/stack.json");
  f << doc.dump(1) << "\n";
}

StageStack read_stage_json(const fs::path& out, const std::string& stage) {
  const fs::path path = out / stage / "stack.json";
  std::ifstream f(path);
  if (!f)
    throw Error(ErrorCode::IoFailure,
                "missing artifact '" + path.string() + "'; run the " + stage +
                    " stage first");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  StageStack stack;
  for (const auto& b : doc.at("bands")) {
    StageStack::Entry e;
    e.name = b.at("name").get<std::string>();
    e.role = role_from_name(b.at("role").get<std::string>());
    e.is_static = b.at("kind").get<std::string>() == "static";
    e.aggregation = b.at("aggregation").get<std::string>() == "median"
                        ? AggregationPolicy::Median
                        : AggregationPolicy::Mean;
    e.categorical = b.at("categorical").get<bool>();
    e.impute = b.at("impute").get<std::string>();
    if (e.is_static) {
      e.file = b.at("file").get<std::string>();
    } else {
      for (const auto& [year, file] : b.at("files").items())
        e.files[std::stoi(year)] = file.get<std::string>();
    }
    stack.entries.push_back(std::move(e));
  }
  stack.fire_min_class = doc.at("fire").at("min_class").get<int>();
  for (const auto& [year, file] : doc.at("fire").at("files").items())
    stack.fire_files[std::stoi(year)] = file.get<std::string>();
  stack.forest_file = doc.at("forest").get<std::string>();
  return stack;
}

struct LoadedStack {
  FeatureStack features;  // predictor bands only (Target excluded)
  FireMask fire;
  int fire_min_class = 9;
  Grid forest;
  StageStack manifest;
};

LoadedStack load_stack(const fs::path& out, const std::string& stage, CrsKind crs) {
  StageStack manifest = read_stage_json(out, stage);
  LoadedStack loaded;
  std::vector<FeatureStack::NamedBand> bands;
  for (const auto& e : manifest.entries) {
    if (e.role == BandRole::Target) continue;
    BandData band;
    if (e.is_static) {
      band = BandData::make_static(read_ascii_grid(out / e.file, crs), e.role,
                                   e.categorical);
    } else {
      BandData::YearLayers layers;
      for (const auto& [year, file] : e.files)
        layers.emplace(year, read_ascii_grid(out / file, crs));
      band = BandData::make_dynamic(std::move(layers), e.role, e.aggregation);
      band.categorical = e.categorical;
    }
    band.aggregation = e.aggregation;
    bands.emplace_back(e.name, std::move(band));
  }
  loaded.features = FeatureStack::make(std::move(bands));
  for (const auto& [year, file] : manifest.fire_files)
    loaded.fire.years.emplace(year, read_ascii_grid(out / file, crs));
  loaded.fire_min_class = manifest.fire_min_class;
  loaded.forest = read_ascii_grid(out / manifest.forest_file, crs);
  loaded.manifest = std::move(manifest);
  return loaded;
}

/// Rewrites a grid so its nodata sentinel matches the stack-wide one.
Grid normalize_nodata(Grid g, double nodata) {
  if (g.nodata() == nodata) return g;
  Grid out(g.width(), g.height(), g.transform(), nodata);
  for (int r = 0; r < g.height(); ++r)
    for (int c = 0; c < g.width(); ++c)
      if (!g.is_nodata(r, c)) out.set(r, c, g.at(r, c));
  return out;
}

std::string year_file(const std::string& stage, const std::string& band, int year) {
  return stage + "/" + band + "_" + std::to_string(year) + ".asc";
}

json metrics_to_json(const MetricsReport& r) {
  return json{{"accuracy", r.accuracy},
              {"precision", r.precision},
              {"recall", r.recall},
              {"f1", r.f1},
              {"auc", r.auc_defined ? json(r.auc) : json()},
              {"threshold", r.threshold},
              {"confusion",
               {{"tp", r.counts.tp},
                {"fp", r.counts.fp},
                {"tn", r.counts.tn},
                {"fn", r.counts.fn}}},
              {"fire",
               {{"precision", r.fire.precision},
                {"recall", r.fire.recall},
                {"f1", r.fire.f1},
                {"support", r.fire.support}}},
              {"nonfire",
               {{"precision", r.nonfire.precision},
                {"recall", r.nonfire.recall},
                {"f1", r.nonfire.f1},
                {"support", r.nonfire.support}}}};
}

}  // namespace

PipelineRunner::PipelineRunner(PipelineConfig config, const Overrides& overrides)
    : config_(std::move(config)) {
  if (overrides.seed) config_.seed = *overrides.seed;
  if (overrides.threads) config_.threads = *overrides.threads;
  out_ = overrides.out_dir ? *overrides.out_dir : config_.out_dir;
  if (out_.is_relative()) out_ = config_.base_dir / out_;
  set_max_threads(config_.threads);
}

template <typename Fn>
void PipelineRunner::timed_stage(const std::string& name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  timings_.push_back({name, elapsed.count()});
}

void PipelineRunner::run_ingest() {
  timed_stage("ingest", [&] {
    fs::create_directories(out_ / "ingest");

    // The first band fixes the reference frame; everything else is
    // resampled onto it.
    const BandConfig& first = config_.bands.front();
    Grid reference = read_ascii_grid(
        first.is_static
            ? first.path
            : config_.base_dir / [&] {
                std::string p = first.pattern;
                p.replace(p.find("{year}"), 6, std::to_string(first.years.front()));
                return p;
              }(),
        config_.crs);

    auto conform = [&](Grid g) {
      g = normalize_nodata(std::move(g), reference.nodata());
      if (g.same_frame(reference)) return g;
      return align(g, reference.transform(), reference.width(), reference.height());
    };
    auto load_yearly = [&](const std::string& pattern, int year) {
      std::string p = pattern;
      p.replace(p.find("{year}"), 6, std::to_string(year));
      return conform(read_ascii_grid(config_.base_dir / p, config_.crs));
    };

    StageStack stage;
    for (const BandConfig& band : config_.bands) {
      StageStack::Entry e;
      e.name = band.name;
      e.role = band.role;
      e.is_static = band.is_static;
      e.aggregation = band.aggregation;
      e.categorical = band.categorical;
      e.impute = band.impute;

      std::map<double, int> encoding(band.encode.begin(), band.encode.end());
      auto maybe_encode = [&](Grid g) {
        return encoding.empty() ? g : label_encode(g, encoding);
      };

      if (band.is_static) {
        Grid g = maybe_encode(conform(read_ascii_grid(band.path, config_.crs)));
        e.file = "ingest/" + band.name + ".asc";
        write_ascii_grid(g, out_ / e.file);
      } else {
        for (int year : band.years) {
          Grid g = maybe_encode(load_yearly(band.pattern, year));
          const std::string file = year_file("ingest", band.name, year);
          write_ascii_grid(g, out_ / file);
          e.files[year] = file;
        }
      }
      stage.entries.push_back(std::move(e));
    }

    for (const DeriveConfig& d : config_.derived) {
      const VectorLayer layer = read_vector_geojson(d.vector_path, config_.crs);
      Grid g = d.kind == DeriveConfig::Kind::Distance
                   ? euclidean_distance_raster(layer, reference.transform(),
                                               reference.width(), reference.height())
                   : density_raster(layer, reference.transform(), reference.width(),
                                    reference.height(), d.radius);
      g = normalize_nodata(std::move(g), reference.nodata());
      StageStack::Entry e;
      e.name = d.name;
      e.role = d.role;
      e.is_static = true;
      e.file = "ingest/" + d.name + ".asc";
      write_ascii_grid(g, out_ / e.file);
      stage.entries.push_back(std::move(e));
    }

    for (int year : config_.fire_years) {
      Grid g = load_yearly(config_.fire_pattern, year);
      const std::string file = year_file("ingest", "fire", year);
      write_ascii_grid(g, out_ / file);
      stage.fire_files[year] = file;
    }
    stage.fire_min_class = config_.fire_min_class;

    Grid forest = conform(read_ascii_grid(config_.forest_mask, config_.crs));
    stage.forest_file = "ingest/forest.asc";
    write_ascii_grid(forest, out_ / stage.forest_file);

    write_stage_json(out_, "ingest", stage, config_.config_hash);
  });
}

void PipelineRunner::run_impute() {
  timed_stage("impute", [&] {
    fs::create_directories(out_ / "impute");
    StageStack stage = read_stage_json(out_, "ingest");

    json reports = json::array();
    auto impute_one = [&](const std::string& band, int year, const std::string& file,
                          const std::string& method) {
      Grid g = read_ascii_grid(out_ / file, config_.crs);
      std::pair<Grid, ImputeReport> result =
          method == "knn"
              ? knn_impute(g, config_.knn_k, config_.knn_max_radius)
              : kmeans_impute(g, config_.kmeans_clusters,
                              stage_seed(config_.seed,
                                         "impute:" + band + ":" +
                                             std::to_string(year)));
      const std::string out_file =
          year == 0 ? "impute/" + band + ".asc" : year_file("impute", band, year);
      write_ascii_grid(result.first, out_ / out_file);
      reports.push_back({{"band", band},
                         {"year", year},
                         {"method", method},
                         {"filled", result.second.filled},
                         {"unfilled", result.second.unfilled}});
      return out_file;
    };

    for (auto& e : stage.entries) {
      if (e.impute == "none") continue;
      if (e.is_static) {
        e.file = impute_one(e.name, 0, e.file, e.impute);
      } else {
        for (auto& [year, file] : e.files)
          file = impute_one(e.name, year, file, e.impute);
      }
    }

    write_stage_json(out_, "impute", stage, config_.config_hash);
    json doc{{"config_hash", config_.config_hash}, {"reports", reports}};
    std::ofstream f(out_ / "impute" / "report.json");
    f << doc.dump(1) << "\n";
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write impute report");
  });
}

void PipelineRunner::run_features() {
  timed_stage("features", [&] {
    fs::create_directories(out_ / "features");
    const LoadedStack loaded = load_stack(out_, "impute", config_.crs);

    json artifacts = json::array();
    for (const auto& [name, band] : loaded.features.bands()) {
      if (band.is_static()) continue;
      const Grid agg = aggregate(band);
      const std::string agg_file = "features/" + name + ".asc";
      write_ascii_grid(agg, out_ / agg_file);
      artifacts.push_back({{"band", name}, {"kind", "aggregate"}, {"file", agg_file}});
      if (config_.year_mode == YearMode::PerYearAnomaly) {
        for (const auto& [year, grid] : band.years()) {
          (void)grid;
          const Grid a = anomaly(band, year);
          const std::string file =
              "features/" + name + "_anomaly_" + std::to_string(year) + ".asc";
          write_ascii_grid(a, out_ / file);
          artifacts.push_back({{"band", name},
                               {"kind", "anomaly"},
                               {"year", year},
                               {"file", file}});
        }
      }
    }
    json doc{{"config_hash", config_.config_hash}, {"artifacts", artifacts}};
    std::ofstream f(out_ / "features" / "summary.json");
    f << doc.dump(1) << "\n";
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write features summary");
  });
}

void PipelineRunner::run_sample() {
  timed_stage("sample", [&] {
    fs::create_directories(out_ / "sample");
    const LoadedStack loaded = load_stack(out_, "impute", config_.crs);

    ScenarioOptions options;
    options.ratio = config_.ratio;
    options.unique_across_years = config_.unique_across_years;
    ScenarioSplit split =
        build_scenario(config_.scenario, loaded.fire, loaded.forest, config_.split,
                       stage_seed(config_.seed, "sample"), options);

    AttachOptions attach;
    attach.mode = config_.year_mode;
    SampleSet train = attach_features(split.train, loaded.features, attach);
    SampleSet test = attach_features(split.test, loaded.features, attach);

    write_sample_csv(train, out_ / "sample" / "train.csv",
                     "config_hash=" + config_.config_hash);
    write_sample_csv(test, out_ / "sample" / "test.csv",
                     "config_hash=" + config_.config_hash);

    auto provenance_json = [&](const SampleSet& s) {
      return json{{"role", s.provenance.role},
                  {"scenario", s.provenance.scenario},
                  {"seed", s.provenance.seed},
                  {"samples", s.size()},
                  {"fire", s.count_label(1)},
                  {"nonfire", s.count_label(0)},
                  {"dropped_nodata", s.provenance.dropped_nodata},
                  {"buffer_discarded", s.provenance.buffer_discarded}};
    };
    json doc{{"config_hash", config_.config_hash},
             {"scenario", config_.scenario},
             {"buffer_km", config_.split.buffer_km},
             {"ratio", config_.ratio},
             {"train", provenance_json(train)},
             {"test", provenance_json(test)}};
    std::ofstream f(out_ / "sample" / "provenance.json");
    f << doc.dump(1) << "\n";
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write sample provenance");
  });
}

void PipelineRunner::run_analyze() {
  timed_stage("analyze", [&] {
    fs::create_directories(out_ / "analyze");
    const SampleSet train = read_sample_csv(out_ / "sample" / "train.csv");

    const CorrelationMatrix pearson = pearson_matrix(train);
    {
      std::ofstream f(out_ / "analyze" / "pearson.csv");
      write_matrix_csv(pearson, f, "config_hash=" + config_.config_hash);
      if (!f) throw Error(ErrorCode::IoFailure, "cannot write pearson.csv");
    }
    {
      const FeatureScores nmi = nmi_feature_scores(train, config_.nmi_bins);
      std::ofstream f(out_ / "analyze" / "nmi.csv");
      write_scores_csv(nmi, f, "config_hash=" + config_.config_hash);
      if (!f) throw Error(ErrorCode::IoFailure, "cannot write nmi.csv");
    }
    {
      const FeatureScores vif = vif_scores(train);
      std::ofstream f(out_ / "analyze" / "vif.csv");
      write_scores_csv(vif, f, "config_hash=" + config_.config_hash);
      if (!f) throw Error(ErrorCode::IoFailure, "cannot write vif.csv");
    }
  });
}

void PipelineRunner::run_train() {
  timed_stage("train", [&] {
    fs::create_directories(out_ / "train");
    const SampleSet train = read_sample_csv(out_ / "sample" / "train.csv");

    for (const std::string& name : config_.run_models) {
      const std::uint64_t seed = stage_seed(config_.seed, "train:" + name);
      Model model = [&] {
        switch (model_kind_from_name(name)) {
          case ModelKind::DecisionTree: return train_decision_tree(train, config_.dt);
          case ModelKind::RandomForest:
            return train_random_forest(train, config_.rf, seed);
          case ModelKind::Gbt: return train_gbt(train, config_.gbt, seed);
          case ModelKind::Xgb: return train_xgb(train, config_.xgb, seed);
          case ModelKind::Knn: return train_knn(train, config_.knn);
          case ModelKind::Svm: return train_svm_rbf(train, config_.svm, seed);
        }
        throw Error(ErrorCode::InvalidArgument, "unknown model kind");
      }();
      save_model(model, out_ / "train" / ("model_" + name + ".json"),
                 config_.config_hash);
    }
  });
}

void PipelineRunner::run_evaluate() {
  timed_stage("evaluate", [&] {
    fs::create_directories(out_ / "evaluate");
    const SampleSet test = read_sample_csv(out_ / "sample" / "test.csv");

    std::vector<int> labels = test.labels();
    json model_reports = json::object();
    std::ostringstream csv;
    csv << "# config_hash=" << config_.config_hash << "\n";
    csv << metrics_csv_header() << "\n";

    for (const std::string& name : config_.run_models) {
      const Model model = load_model(out_ / "train" / ("model_" + name + ".json"));
      std::vector<double> probs;
      probs.reserve(test.size());
      for (const auto& s : test.samples) probs.push_back(model.predict_proba(s.features));

      const MetricsReport report = metrics(labels, probs);
      model_reports[name] = metrics_to_json(report);
      csv << metrics_csv_row(name, report) << "\n";

      const RocCurve roc = roc_auc(labels, probs);
      {
        std::ofstream f(out_ / "evaluate" / ("roc_" + name + ".csv"));
        write_roc_csv(roc, f, "config_hash=" + config_.config_hash);
        if (!f) throw Error(ErrorCode::IoFailure, "cannot write roc csv");
      }
      {
        std::ofstream f(out_ / "evaluate" / ("roc_" + name + ".svg"));
        f << roc_svg(roc);
        if (!f) throw Error(ErrorCode::IoFailure, "cannot write roc svg");
      }
    }

    json doc{{"config_hash", config_.config_hash},
             {"threshold", 0.5},
             {"models", model_reports}};
    std::ofstream f(out_ / "evaluate" / "metrics.json");
    f << doc.dump(1) << "\n";
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write metrics.json");
    std::ofstream fc(out_ / "evaluate" / "metrics.csv");
    fc << csv.str();
    if (!fc) throw Error(ErrorCode::IoFailure, "cannot write metrics.csv");
  });
}

void PipelineRunner::run_map() {
  timed_stage("map", [&] {
    fs::create_directories(out_ / "map");
    const LoadedStack loaded = load_stack(out_, "impute", config_.crs);
    for (const std::string& name : config_.run_models) {
      const Model model = load_model(out_ / "train" / ("model_" + name + ".json"));
      PredictSpec spec;
      spec.mode = config_.year_mode;
      spec.year = config_.map_year;
      const RiskMap risk = make_risk_map(model, loaded.features, spec,
                                         config_.map_classes, config_.map_method);
      write_ascii_grid(risk.probability, out_ / "map" / ("prob_" + name + ".asc"));
      write_ascii_grid(risk.classes, out_ / "map" / ("risk_" + name + ".asc"));

      {
        std::ofstream f(out_ / "map" / ("risk_" + name + ".ppm"), std::ios::binary);
        const std::string ppm = render_ppm(risk.classes, risk.palette);
        f.write(ppm.data(), std::streamsize(ppm.size()));
        if (!f) throw Error(ErrorCode::IoFailure, "cannot write risk ppm");
      }
      {
        std::ofstream f(out_ / "map" / ("risk_" + name + ".png"), std::ios::binary);
        const auto png = render_png(risk.classes, risk.palette);
        f.write(reinterpret_cast<const char*>(png.data()), std::streamsize(png.size()));
        if (!f) throw Error(ErrorCode::IoFailure, "cannot write risk png");
      }

      json doc{{"config_hash", config_.config_hash},
               {"model", name},
               {"year", config_.map_year},
               {"method",
                config_.map_method == BreakMethod::Quantile ? "quantile" : "jenks"},
               {"breaks", risk.breaks},
               {"histogram", class_histogram(risk.classes, config_.map_classes)}};
      std::ofstream f(out_ / "map" / ("risk_" + name + ".json"));
      f << doc.dump(1) << "\n";
      if (!f) throw Error(ErrorCode::IoFailure, "cannot write risk sidecar");
    }
  });
}

void PipelineRunner::run_pipeline() {
  run_ingest();
  run_impute();
  run_features();
  run_sample();
  run_analyze();
  run_train();
  run_evaluate();
  run_map();
  write_manifest();
}

void PipelineRunner::write_manifest() const {
  json inputs = json::object();
  auto add_input = [&](const fs::path& path) {
    inputs[path.filename().string()] = sha256_file(path);
  };
  add_input(config_.config_path);
  for (const BandConfig& band : config_.bands) {
    if (band.is_static) {
      add_input(band.path);
    } else {
      for (int year : band.years) {
        std::string p = band.pattern;
        p.replace(p.find("{year}"), 6, std::to_string(year));
        add_input(config_.base_dir / p);
      }
    }
  }
  for (const DeriveConfig& d : config_.derived) add_input(d.vector_path);
  for (int year : config_.fire_years) {
    std::string p = config_.fire_pattern;
    p.replace(p.find("{year}"), 6, std::to_string(year));
    add_input(config_.base_dir / p);
  }
  add_input(config_.forest_mask);

  json models = json::object();
  for (const std::string& name : config_.run_models) {
    const fs::path path = out_ / "train" / ("model_" + name + ".json");
    if (fs::exists(path)) models[name] = sha256_file(path);
  }

  json metrics = json();
  {
    const fs::path path = out_ / "evaluate" / "metrics.json";
    if (fs::exists(path)) {
      std::ifstream f(path);
      metrics = json::parse(f);
    }
  }

  json timings = json::array();
  for (const StageTiming& t : timings_)
    timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});

  json doc{{"tool_version", kVersion},
           {"config_hash", config_.config_hash},
           {"seed", config_.seed},
           {"inputs", inputs},
           {"model_digests", models},
           {"metrics", metrics},
           {"timings", timings}};
  std::ofstream f(out_ / "manifest.json");
  f << doc.dump(1) << "\n";
  if (!f) throw Error(ErrorCode::IoFailure, "cannot write manifest.json");
}

}  // namespace wildfire
