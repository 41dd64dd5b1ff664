#include "wildfire/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

#include "wildfire/error.hpp"

namespace wildfire {

namespace {

void check_inputs(std::span<const int> labels, std::span<const double> probabilities) {
  if (labels.size() != probabilities.size())
    throw Error(ErrorCode::LengthMismatch, "labels and probabilities differ in length");
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "no predictions to score");
}

}  // namespace

Confusion confusion(std::span<const int> labels, std::span<const double> probabilities,
                    double threshold) {
  check_inputs(labels, probabilities);
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = probabilities[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual)
      ++c.tp;
    else if (predicted && !actual)
      ++c.fp;
    else if (!predicted && actual)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

MetricsReport metrics(std::span<const int> labels,
                      std::span<const double> probabilities, double threshold) {
  const Confusion c = confusion(labels, probabilities, threshold);
  const double n = double(c.total());

  MetricsReport r;
  r.counts = c;
  r.threshold = threshold;
  r.accuracy = double(c.tp + c.tn) / n;

  r.fire.support = c.tp + c.fn;
  r.nonfire.support = c.tn + c.fp;
  const std::int64_t pred_pos = c.tp + c.fp;
  const std::int64_t pred_neg = c.tn + c.fn;
  r.fire.zero_division = pred_pos == 0;
  r.nonfire.zero_division = pred_neg == 0;
  r.fire.precision = pred_pos > 0 ? double(c.tp) / double(pred_pos) : 0.0;
  r.nonfire.precision = pred_neg > 0 ? double(c.tn) / double(pred_neg) : 0.0;
  r.fire.recall = r.fire.support > 0 ? double(c.tp) / double(r.fire.support) : 0.0;
  r.nonfire.recall =
      r.nonfire.support > 0 ? double(c.tn) / double(r.nonfire.support) : 0.0;
  auto f1_of = [](const ClassMetrics& m) {
    const double pr = m.precision + m.recall;
    return pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  };
  r.fire.f1 = f1_of(r.fire);
  r.nonfire.f1 = f1_of(r.nonfire);

  r.precision = (double(r.fire.support) * r.fire.precision +
                 double(r.nonfire.support) * r.nonfire.precision) /
                n;
  // Support-weighted recall: sum_c n_c * (correct_c / n_c) = tp + tn, so
  // the exact value is (tp+tn)/n == accuracy.
  r.recall = double(c.tp + c.tn) / n;
  r.f1 = (double(r.fire.support) * r.fire.f1 +
          double(r.nonfire.support) * r.nonfire.f1) /
         n;

  const bool both = r.fire.support > 0 && r.nonfire.support > 0;
  if (both) {
    r.auc = roc_auc(labels, probabilities).auc;
    r.auc_defined = true;
  }
  return r;
}

RocCurve roc_auc(std::span<const int> labels, std::span<const double> probabilities) {
  check_inputs(labels, probabilities);
  std::int64_t n_pos = 0, n_neg = 0;
  for (int y : labels) (y == 1 ? n_pos : n_neg) += 1;
  if (n_pos == 0 || n_neg == 0)
    throw Error(ErrorCode::SingleClass, "ROC needs both classes present");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probabilities[a] > probabilities[b];
  });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  std::int64_t tp = 0, fp = 0;
  double auc = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // Group equal scores into a single step.
    const double score = probabilities[order[i]];
    std::int64_t d_tp = 0, d_fp = 0;
    while (i < order.size() && probabilities[order[i]] == score) {
      (labels[order[i]] == 1 ? d_tp : d_fp) += 1;
      ++i;
    }
    const double fpr0 = double(fp) / double(n_neg);
    const double tpr0 = double(tp) / double(n_pos);
    tp += d_tp;
    fp += d_fp;
    const double fpr1 = double(fp) / double(n_neg);
    const double tpr1 = double(tp) / double(n_pos);
    auc += (fpr1 - fpr0) * (tpr1 + tpr0) / 2.0;
    curve.points.emplace_back(fpr1, tpr1);
  }
  curve.auc = auc;
  return curve;
}

SeasonalReport seasonal_eval(const SampleSet& samples, const TrainFn& trainer,
                             const SplitSpec& split) {
  SampleSet cold, warm;
  for (SampleSet* set : {&cold, &warm}) {
    set->feature_names = samples.feature_names;
    set->categorical_features = samples.categorical_features;
    set->provenance = samples.provenance;
  }
  for (const LabeledSample& s : samples.samples)
    (season_of(s.month) == Season::Cold ? cold : warm).samples.push_back(s);

  SeasonalReport report;
  report.cold_count = std::int64_t(cold.size());
  report.warm_count = std::int64_t(warm.size());

  auto evaluate_season = [&](const SampleSet& season_set, Season season) {
    if (season_set.samples.empty())
      throw Error(ErrorCode::EmptySeason,
                  std::string("no samples in the ") + season_name(season) +
                      " season");
    SampleSet train, test;
    for (SampleSet* set : {&train, &test}) {
      set->feature_names = season_set.feature_names;
      set->categorical_features = season_set.categorical_features;
    }
    for (const LabeledSample& s : season_set.samples) {
      if (split.train_years.count(s.year))
        train.samples.push_back(s);
      else if (split.test_years.count(s.year))
        test.samples.push_back(s);
    }
    if (train.samples.empty() || test.samples.empty())
      throw Error(ErrorCode::EmptySeason,
                  std::string(season_name(season)) +
                      " season lacks train or test samples");
    const Model model = trainer(train);
    std::vector<int> labels;
    std::vector<double> probs;
    labels.reserve(test.size());
    probs.reserve(test.size());
    for (const LabeledSample& s : test.samples) {
      labels.push_back(s.label);
      probs.push_back(model.predict_proba(s.features));
    }
    return metrics(labels, probs);
  };

  report.cold = evaluate_season(cold, Season::Cold);
  report.warm = evaluate_season(warm, Season::Warm);
  return report;
}

std::string metrics_csv_header() {
  return "model,accuracy,precision,recall,f1,auc,threshold,tp,fp,tn,fn";
}

std::string metrics_csv_row(const std::string& model_name, const MetricsReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,%lld,%lld,%lld",
                model_name.c_str(), r.accuracy, r.precision, r.recall, r.f1,
                r.auc_defined ? r.auc : -1.0, r.threshold,
                (long long)r.counts.tp, (long long)r.counts.fp,
                (long long)r.counts.tn, (long long)r.counts.fn);
  return std::string(buf);
}

void write_roc_csv(const RocCurve& roc, std::ostream& out,
                   const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "fpr,tpr\n";
  char buf[80];
  for (const auto& [fpr, tpr] : roc.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", fpr, tpr);
    out << buf << "\n";
  }
}

std::string roc_svg(const RocCurve& roc, int size_px) {
  const int margin = 24;
  const int plot = size_px - 2 * margin;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px
      << "\" height=\"" << size_px << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto px = [&](double fpr) { return margin + fpr * plot; };
  auto py = [&](double tpr) { return margin + (1.0 - tpr) * plot; };
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
      << "\" y2=\"" << py(1) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4\"/>\n";
  svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
  for (const auto& [fpr, tpr] : roc.points) svg << px(fpr) << ',' << py(tpr) << ' ';
  svg << "\"/>\n";
  char label[64];
  std::snprintf(label, sizeof label, "AUC = %.4f", roc.auc);
  svg << "<text x=\"" << margin + 8 << "\" y=\"" << margin + 16
      << "\" font-family=\"sans-serif\" font-size=\"13\">" << label << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace wildfire
