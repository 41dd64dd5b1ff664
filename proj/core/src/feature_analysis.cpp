#include "wildfire/feature_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "wildfire/error.hpp"

namespace wildfire {

JointHistogram JointHistogram::from_counts(int bins_x, int bins_y,
                                           std::vector<double> counts) {
  if (bins_x < 1 || bins_y < 1 ||
      counts.size() != std::size_t(bins_x) * std::size_t(bins_y))
    throw Error(ErrorCode::InvalidArgument, "bad joint histogram shape");
  JointHistogram h;
  h.bins_x = bins_x;
  h.bins_y = bins_y;
  h.counts = std::move(counts);
  return h;
}

JointHistogram JointHistogram::from_assignments(const std::vector<int>& xs,
                                                const std::vector<int>& ys,
                                                int bins_x, int bins_y) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::LengthMismatch, "assignment vectors differ in length");
  JointHistogram h;
  h.bins_x = bins_x;
  h.bins_y = bins_y;
  h.counts.assign(std::size_t(bins_x) * bins_y, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    h.counts[std::size_t(xs[i]) * bins_y + ys[i]] += 1.0;
  return h;
}

double JointHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

std::vector<double> JointHistogram::marginal_x() const {
  std::vector<double> m(std::size_t(bins_x), 0.0);
  for (int x = 0; x < bins_x; ++x)
    for (int y = 0; y < bins_y; ++y) m[std::size_t(x)] += count(x, y);
  return m;
}

std::vector<double> JointHistogram::marginal_y() const {
  std::vector<double> m(std::size_t(bins_y), 0.0);
  for (int x = 0; x < bins_x; ++x)
    for (int y = 0; y < bins_y; ++y) m[std::size_t(y)] += count(x, y);
  return m;
}

double mutual_information(const JointHistogram& h) {
  const double n = h.total();
  if (!(n > 0.0))
    throw Error(ErrorCode::EmptyHistogram, "histogram has zero total count");
  const auto mx = h.marginal_x();
  const auto my = h.marginal_y();

  std::vector<double> terms;
  terms.reserve(h.counts.size());
  for (int x = 0; x < h.bins_x; ++x) {
    for (int y = 0; y < h.bins_y; ++y) {
      const double c = h.count(x, y);
      if (c <= 0.0) continue;
      const double pxy = c / n;
      const double px = mx[std::size_t(x)] / n;
      const double py = my[std::size_t(y)] / n;
      terms.push_back(pxy * std::log(pxy / (px * py)));
    }
  }
  // Sorted accumulation: the term multiset is invariant under transposing
  // the histogram, so MI(X,Y) == MI(Y,X) bit-for-bit.
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double t : terms) mi += t;
  return mi;
}

double entropy_nats(const std::vector<double>& counts) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(n > 0.0)) return 0.0;
  std::vector<double> terms;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / n;
    terms.push_back(-p * std::log(p));
  }
  std::sort(terms.begin(), terms.end());
  double h = 0.0;
  for (double t : terms) h += t;
  return h;
}

std::vector<int> equal_frequency_bins(const std::vector<double>& values, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be >= 1");
  const std::size_t n = values.size();
  if (n == 0) return {};
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());

  // Upper edges at the i/bins quantiles (linear interpolation). Ties in
  // the data land in one bin because assignment is by value.
  std::vector<double> edges;
  edges.reserve(std::size_t(bins) - 1);
  for (int b = 1; b < bins; ++b) {
    const double pos = double(b) / bins * double(n - 1);
    const std::size_t lo = std::size_t(pos);
    const double frac = pos - double(lo);
    const double q = lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
                                : sorted[lo];
    edges.push_back(q);
  }

  std::vector<int> assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = values[i];
    int b = 0;
    while (b < int(edges.size()) && v > edges[std::size_t(b)]) ++b;
    assign[i] = b;
  }
  return assign;
}

std::vector<int> category_bins(const std::vector<double>& values, int& n_levels) {
  std::map<double, int> levels;
  for (double v : values) levels.emplace(v, 0);
  int next = 0;
  for (auto& [v, idx] : levels) idx = next++;
  n_levels = next;
  std::vector<int> assign;
  assign.reserve(values.size());
  for (double v : values) assign.push_back(levels[v]);
  return assign;
}

CorrelationMatrix pearson_matrix(const SampleSet& samples) {
  const std::size_t p = samples.feature_names.size();
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 samples");

  std::vector<std::vector<double>> centered(p);
  std::vector<double> norm(p, 0.0);
  CorrelationMatrix m;
  m.names = samples.feature_names;
  m.constant.assign(p, false);
  for (std::size_t j = 0; j < p; ++j) {
    centered[j] = samples.feature_column(j);
    const double mean =
        std::accumulate(centered[j].begin(), centered[j].end(), 0.0) / double(n);
    double ss = 0.0;
    for (double& v : centered[j]) {
      v -= mean;
      ss += v * v;
    }
    norm[j] = std::sqrt(ss);
    if (norm[j] == 0.0) m.constant[j] = true;
  }

  m.values.assign(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    m.values[i * p + i] = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      double r = 0.0;
      if (!m.constant[i] && !m.constant[j]) {
        double dot = 0.0;
        for (std::size_t s = 0; s < n; ++s) dot += centered[i][s] * centered[j][s];
        r = dot / (norm[i] * norm[j]);
        r = std::clamp(r, -1.0, 1.0);
      }
      m.values[i * p + j] = r;
      m.values[j * p + i] = r;
    }
  }
  return m;
}

FeatureScores nmi_feature_scores(const SampleSet& samples, int bins) {
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "bins must be >= 2");
  const std::size_t n = samples.size();
  if (std::int64_t(n) < bins)
    throw Error(ErrorCode::TooFewSamples, "need at least `bins` samples");

  // Target occupies its native levels (0/1 labels here).
  std::vector<double> label_values;
  label_values.reserve(n);
  for (const auto& s : samples.samples) label_values.push_back(double(s.label));
  int label_levels = 0;
  const auto label_assign = category_bins(label_values, label_levels);
  std::vector<double> label_counts(std::size_t(label_levels), 0.0);
  for (int a : label_assign) label_counts[std::size_t(a)] += 1.0;
  const double h_y = entropy_nats(label_counts);

  FeatureScores out;
  out.method = ScoreMethod::Nmi;
  out.bins = bins;
  out.normalization = "sqrt(H(x)H(y)), min-max rescaled";
  out.names = samples.feature_names;

  for (std::size_t j = 0; j < samples.feature_names.size(); ++j) {
    const auto column = samples.feature_column(j);
    std::vector<int> assign;
    int levels = 0;
    if (samples.is_categorical(samples.feature_names[j])) {
      assign = category_bins(column, levels);
    } else {
      assign = equal_frequency_bins(column, bins);
      levels = bins;
    }
    const auto joint =
        JointHistogram::from_assignments(assign, label_assign, levels, label_levels);
    const double h_x = entropy_nats(joint.marginal_x());
    double raw = 0.0;
    if (h_x > 0.0 && h_y > 0.0)
      raw = mutual_information(joint) / std::sqrt(h_x * h_y);
    out.raw_scores.push_back(raw);
  }

  const auto [lo_it, hi_it] =
      std::minmax_element(out.raw_scores.begin(), out.raw_scores.end());
  const double lo = *lo_it, hi = *hi_it;
  out.scores.reserve(out.raw_scores.size());
  for (double raw : out.raw_scores)
    out.scores.push_back(hi > lo ? (raw - lo) / (hi - lo) : raw);
  return out;
}

OlsFit ols_fit(const std::vector<double>& y,
               const std::vector<std::vector<double>>& columns, double ridge) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size() + 1;  // + intercept
  for (const auto& c : columns)
    if (c.size() != n)
      throw Error(ErrorCode::LengthMismatch, "OLS column length mismatch");

  auto col_value = [&](std::size_t j, std::size_t row) {
    return j == 0 ? 1.0 : columns[j - 1][row];
  };

  // Normal equations (X'X + ridge*I) b = X'y; the jitter skips the
  // intercept so a constant response stays exactly fit.
  std::vector<double> xtx(p * p, 0.0);
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += col_value(i, r) * col_value(j, r);
      xtx[i * p + j] = s;
      xtx[j * p + i] = s;
    }
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += col_value(i, r) * y[r];
    xty[i] = s;
  }
  for (std::size_t i = 1; i < p; ++i) xtx[i * p + i] += ridge;

  // Cholesky with diagonal boosting if needed.
  std::vector<double> chol(xtx);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = chol[i * p + j];
      for (std::size_t k = 0; k < j; ++k) s -= chol[i * p + k] * chol[j * p + k];
      if (i == j) {
        if (s <= 0.0) s = ridge > 0.0 ? ridge : 1e-30;
        chol[i * p + i] = std::sqrt(s);
      } else {
        chol[i * p + j] = s / chol[j * p + j];
      }
    }
  }
  // forward/backward solve
  std::vector<double> z(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    double s = xty[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol[i * p + k] * z[k];
    z[i] = s / chol[i * p + i];
  }
  OlsFit fit;
  fit.coefficients.assign(p, 0.0);
  for (std::size_t ii = p; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t k = ii + 1; k < p; ++k)
      s -= chol[k * p + ii] * fit.coefficients[k];
    fit.coefficients[ii] = s / chol[ii * p + ii];
  }

  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
  double sse = 0.0, sst = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double pred = 0.0;
    for (std::size_t j = 0; j < p; ++j) pred += fit.coefficients[j] * col_value(j, r);
    sse += (y[r] - pred) * (y[r] - pred);
    sst += (y[r] - mean_y) * (y[r] - mean_y);
  }
  double r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
  fit.r_squared = std::clamp(r2, 0.0, 1.0 - 1e-12);
  return fit;
}

FeatureScores vif_scores(const SampleSet& samples) {
  const std::size_t p = samples.feature_names.size();
  const std::size_t n = samples.size();
  if (n < p + 2)
    throw Error(ErrorCode::TooFewSamples, "need at least p+2 samples for VIF");

  std::vector<std::vector<double>> columns(p);
  for (std::size_t j = 0; j < p; ++j) columns[j] = samples.feature_column(j);

  FeatureScores out;
  out.method = ScoreMethod::Vif;
  out.normalization = "1/(1-R^2), capped at 1e6";
  out.names = samples.feature_names;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<std::vector<double>> others;
    others.reserve(p - 1);
    for (std::size_t i = 0; i < p; ++i)
      if (i != j) others.push_back(columns[i]);
    const OlsFit fit = ols_fit(columns[j], others);
    const double vif =
        fit.r_squared >= 1.0 - 1e-6 ? kVifCap : 1.0 / (1.0 - fit.r_squared);
    out.scores.push_back(vif);
  }
  out.raw_scores = out.scores;
  return out;
}

namespace {

void write_comment(std::ostream& out, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
}

}  // namespace

void write_scores_csv(const FeatureScores& scores, std::ostream& out,
                      const std::string& comment) {
  write_comment(out, comment);
  std::vector<std::size_t> order(scores.names.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.scores[a] > scores.scores[b];
  });
  out << "feature,score\n";
  char buf[64];
  for (std::size_t i : order) {
    std::snprintf(buf, sizeof buf, "%.17g", scores.scores[i]);
    out << scores.names[i] << ',' << buf << "\n";
  }
}

void write_matrix_csv(const CorrelationMatrix& m, std::ostream& out,
                      const std::string& comment) {
  write_comment(out, comment);
  out << "feature";
  for (const auto& name : m.names) out << ',' << name;
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out << m.names[i];
    for (std::size_t j = 0; j < m.names.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m.at(i, j));
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace wildfire
