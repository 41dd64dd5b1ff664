#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wildfire/models/model.hpp"
#include "wildfire/sampling.hpp"
#include "wildfire/stack.hpp"

namespace wildfire {

/// Band reading mode for wall-to-wall prediction; `year` selects the
/// anomaly layer when mode == PerYearAnomaly.
struct PredictSpec {
  YearMode mode = YearMode::AggregatedStatic;
  int year = 0;
};

/// Per-cell fire probability over the whole stack. Cells with any nodata
/// feature become nodata.
Grid predict_grid(const Model& model, const FeatureStack& stack,
                  const PredictSpec& spec = {});

enum class BreakMethod { Quantile, Jenks };

struct RiskClassification {
  Grid classes;                // values 1..n_classes, nodata preserved
  std::vector<double> breaks;  // n_classes - 1 ascending thresholds
};

/// Splits probabilities into ordinal classes (1 = very low ... 5 = very
/// high). Quantile breaks sit at the 20/40/60/80 percentiles (linear
/// interpolation); class c covers (break_{c-1}, break_c].
RiskClassification classify_risk(const Grid& probability, int n_classes = 5,
                                 BreakMethod method = BreakMethod::Quantile);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct Palette {
  std::vector<Rgb> colors;  // one per class, low to high risk

  /// Default 5-stop ramp blue -> cyan -> yellow -> orange -> red.
  static Palette blue_to_red();
};

/// Probability surface plus its derived ordinal classes and rendering
/// palette; the complete map artifact for one model.
struct RiskMap {
  Grid probability;
  Grid classes;
  std::vector<double> breaks;
  Palette palette;
};

RiskMap make_risk_map(const Model& model, const FeatureStack& stack,
                      const PredictSpec& spec = {}, int n_classes = 5,
                      BreakMethod method = BreakMethod::Quantile);

/// Binary PPM (P6, maxval 255), one pixel per cell; nodata renders white.
std::string render_ppm(const Grid& classes, const Palette& palette);

/// 8-bit RGBA PNG; nodata renders transparent.
std::vector<std::uint8_t> render_png(const Grid& classes, const Palette& palette);

/// Count of valid cells per class value 1..n_classes.
std::vector<std::int64_t> class_histogram(const Grid& classes, int n_classes);

}  // namespace wildfire
