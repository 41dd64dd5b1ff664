#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wildfire/sample_set.hpp"

namespace wildfire {

/// Joint counts of two discretized variables; marginals derive from row
/// and column sums.
struct JointHistogram {
  int bins_x = 0;
  int bins_y = 0;
  std::vector<double> counts;  // bins_x * bins_y, row-major over x

  static JointHistogram from_counts(int bins_x, int bins_y,
                                    std::vector<double> counts);
  static JointHistogram from_assignments(const std::vector<int>& xs,
                                         const std::vector<int>& ys, int bins_x,
                                         int bins_y);

  double count(int x, int y) const { return counts[std::size_t(x) * bins_y + y]; }
  double total() const;
  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;
};

/// Mutual information in nats: sum P(x,y) ln(P(x,y)/(P(x)P(y))), with
/// 0 * ln(0/q) := 0. Terms are accumulated in sorted order so the result
/// is exactly symmetric in X and Y.
double mutual_information(const JointHistogram& h);

/// Shannon entropy in nats of a marginal count vector.
double entropy_nats(const std::vector<double>& counts);

/// Equal-frequency discretization into at most `bins` bins.
std::vector<int> equal_frequency_bins(const std::vector<double>& values, int bins);

/// Values discretized by their distinct levels (native categories).
std::vector<int> category_bins(const std::vector<double>& values, int& n_levels);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<double> values;  // n x n row-major
  std::vector<bool> constant;  // per-feature zero-variance warning

  double at(std::size_t i, std::size_t j) const {
    return values[i * names.size() + j];
  }
};

/// Pearson correlation of every feature pair. Constant features get
/// correlation 0 against everything (diagonal stays 1) and are flagged.
CorrelationMatrix pearson_matrix(const SampleSet& samples);

enum class ScoreMethod { Pearson, Nmi, Vif };

struct FeatureScores {
  ScoreMethod method = ScoreMethod::Nmi;
  std::vector<std::string> names;
  std::vector<double> scores;
  std::vector<double> raw_scores;  // NMI: pre-rescale values
  int bins = 0;
  std::string normalization;
};

/// NMI of each feature against the fire label. Continuous features use
/// equal-frequency binning, declared-categorical ones their native
/// levels. Raw score = MI / sqrt(H(f) H(y)); reported scores are min-max
/// rescaled across features so the strongest feature reads 1 and the
/// weakest 0.
FeatureScores nmi_feature_scores(const SampleSet& samples, int bins = 16);

struct OlsFit {
  std::vector<double> coefficients;  // intercept first
  double r_squared = 0.0;
};

/// Least squares of y on columns X plus intercept, solved by normal
/// equations with a small ridge jitter for rank safety.
OlsFit ols_fit(const std::vector<double>& y,
               const std::vector<std::vector<double>>& columns,
               double ridge = 1e-10);

inline constexpr double kVifCap = 1e6;

/// Variance inflation factors: regress each feature on all others,
/// VIF = 1/(1-R^2), capped at 1e6 when R^2 >= 1 - 1e-6.
FeatureScores vif_scores(const SampleSet& samples);

/// CSV export `feature,score`, sorted by descending score.
void write_scores_csv(const FeatureScores& scores, std::ostream& out,
                      const std::string& comment = "");
void write_matrix_csv(const CorrelationMatrix& m, std::ostream& out,
                      const std::string& comment = "");

}  // namespace wildfire
