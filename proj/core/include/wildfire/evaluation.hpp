#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wildfire/models/model.hpp"
#include "wildfire/sample_set.hpp"
#include "wildfire/sampling.hpp"
#include "wildfire/temporal.hpp"

namespace wildfire {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
};

/// Prediction = 1 iff probability >= threshold.
Confusion confusion(std::span<const int> labels, std::span<const double> probabilities,
                    double threshold = 0.5);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
  bool zero_division = false;  // no predicted positives for this class
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;  // support-weighted over both classes
  double recall = 0.0;     // equals accuracy by construction
  double f1 = 0.0;
  double auc = 0.0;
  bool auc_defined = false;
  double threshold = 0.5;
  ClassMetrics fire;     // class 1
  ClassMetrics nonfire;  // class 0
  Confusion counts;
};

/// Accuracy plus support-weighted precision/recall/F1 (and AUC when both
/// classes are present). Weighted recall collapses algebraically to
/// (tp+tn)/n and is computed that way, so it equals accuracy exactly.
MetricsReport metrics(std::span<const int> labels,
                      std::span<const double> probabilities, double threshold = 0.5);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0) -> (1,1)
  double auc = 0.0;
};

/// Threshold sweep over distinct scores, equal scores grouped into one
/// step; AUC by the trapezoid rule.
RocCurve roc_auc(std::span<const int> labels, std::span<const double> probabilities);

using TrainFn = std::function<Model(const SampleSet&)>;

struct SeasonalReport {
  MetricsReport cold;
  MetricsReport warm;
  std::int64_t cold_count = 0;
  std::int64_t warm_count = 0;
};

/// Splits month-tagged samples by season, then trains and evaluates each
/// season independently under the year split.
SeasonalReport seasonal_eval(const SampleSet& samples, const TrainFn& trainer,
                             const SplitSpec& split);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& model_name, const MetricsReport& r);
void write_roc_csv(const RocCurve& roc, std::ostream& out,
                   const std::string& comment = "");
/// Minimal SVG polyline plot of a ROC curve.
std::string roc_svg(const RocCurve& roc, int size_px = 360);

}  // namespace wildfire
