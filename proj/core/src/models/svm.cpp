#include <algorithm>
#include <cmath>
#include <vector>

#include "wildfire/error.hpp"
#include "wildfire/models/model.hpp"
#include "wildfire/rng.hpp"

namespace wildfire {

namespace {

/// Working state for the simplified SMO solver on the scaled training set.
struct SmoProblem {
  std::size_t n = 0;
  std::size_t cols = 0;
  const std::vector<double>* x = nullptr;  // scaled rows
  std::vector<double> y;                   // +1 / -1
  double c = 0.0;
  double gamma = 0.0;
  std::vector<double> alpha;
  double b = 0.0;
  std::vector<double> kernel;  // full n x n cache

  double k(std::size_t i, std::size_t j) const { return kernel[i * n + j]; }

  double decision(std::size_t i) const {
    double f = b;
    for (std::size_t j = 0; j < n; ++j)
      if (alpha[j] > 0.0) f += alpha[j] * y[j] * k(j, i);
    return f;
  }
};

void build_kernel(SmoProblem& p) {
  p.kernel.resize(p.n * p.n);
  const auto& x = *p.x;
  for (std::size_t i = 0; i < p.n; ++i) {
    p.kernel[i * p.n + i] = 1.0;
    for (std::size_t j = i + 1; j < p.n; ++j) {
      double acc = 0.0;
      for (std::size_t d = 0; d < p.cols; ++d) {
        const double diff = x[i * p.cols + d] - x[j * p.cols + d];
        acc += diff * diff;
      }
      const double v = std::exp(-p.gamma * acc);
      p.kernel[i * p.n + j] = v;
      p.kernel[j * p.n + i] = v;
    }
  }
}

/// Simplified SMO: sweeps samples, pairs each KKT violator with a random
/// partner. Returns false when the iteration cap was hit first.
bool smo_solve(SmoProblem& p, double tol, int max_passes, std::int64_t max_iter,
               Rng& rng) {
  int passes = 0;
  std::int64_t iterations = 0;
  while (passes < max_passes) {
    if (iterations++ > max_iter) return false;
    int changed = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
      const double ei = p.decision(i) - p.y[i];
      const bool violates = (p.y[i] * ei < -tol && p.alpha[i] < p.c) ||
                            (p.y[i] * ei > tol && p.alpha[i] > 0.0);
      if (!violates) continue;

      std::size_t j = std::size_t(rng.below(p.n - 1));
      if (j >= i) ++j;
      const double ej = p.decision(j) - p.y[j];

      const double ai_old = p.alpha[i];
      const double aj_old = p.alpha[j];
      double lo, hi;
      if (p.y[i] != p.y[j]) {
        lo = std::max(0.0, aj_old - ai_old);
        hi = std::min(p.c, p.c + aj_old - ai_old);
      } else {
        lo = std::max(0.0, ai_old + aj_old - p.c);
        hi = std::min(p.c, ai_old + aj_old);
      }
      if (lo == hi) continue;
      const double eta = 2.0 * p.k(i, j) - p.k(i, i) - p.k(j, j);
      if (eta >= 0.0) continue;

      double aj = aj_old - p.y[j] * (ei - ej) / eta;
      aj = std::clamp(aj, lo, hi);
      if (std::fabs(aj - aj_old) < 1e-5) continue;
      const double ai = ai_old + p.y[i] * p.y[j] * (aj_old - aj);

      p.alpha[i] = ai;
      p.alpha[j] = aj;

      const double b1 = p.b - ei - p.y[i] * (ai - ai_old) * p.k(i, i) -
                        p.y[j] * (aj - aj_old) * p.k(i, j);
      const double b2 = p.b - ej - p.y[i] * (ai - ai_old) * p.k(i, j) -
                        p.y[j] * (aj - aj_old) * p.k(j, j);
      if (ai > 0.0 && ai < p.c)
        p.b = b1;
      else if (aj > 0.0 && aj < p.c)
        p.b = b2;
      else
        p.b = 0.5 * (b1 + b2);
      ++changed;
    }
    passes = changed == 0 ? passes + 1 : 0;
  }
  return true;
}

/// Platt scaling with the standard regularized targets
/// t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2); Newton with backtracking.
void fit_platt(const std::vector<double>& decision, const std::vector<int>& labels,
               double& a, double& b) {
  const std::size_t n = decision.size();
  double n_pos = 0.0, n_neg = 0.0;
  for (int y : labels) (y == 1 ? n_pos : n_neg) += 1.0;
  const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
  const double t_neg = 1.0 / (n_neg + 2.0);

  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = labels[i] == 1 ? t_pos : t_neg;

  a = 1.0;
  b = std::log((n_neg + 1.0) / (n_pos + 1.0));  // sign: p = sigma(a f + b)
  b = -b;

  auto nll = [&](double pa, double pb) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = pa * decision[i] + pb;
      // log(1 + exp(-z)) stable in both tails
      const double log_p = z > 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
      const double log_1mp = z > 0.0 ? -z - std::log1p(std::exp(-z)) : -std::log1p(std::exp(z));
      loss -= target[i] * log_p + (1.0 - target[i]) * log_1mp;
    }
    return loss;
  };

  double loss = nll(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double g_a = 0.0, g_b = 0.0, h_aa = 1e-12, h_ab = 0.0, h_bb = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = a * decision[i] + b;
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double d = p - target[i];
      const double w = std::max(p * (1.0 - p), 1e-12);
      g_a += d * decision[i];
      g_b += d;
      h_aa += w * decision[i] * decision[i];
      h_ab += w * decision[i];
      h_bb += w;
    }
    const double det = h_aa * h_bb - h_ab * h_ab;
    if (std::fabs(det) < 1e-300) break;
    double step_a = (h_bb * g_a - h_ab * g_b) / det;
    double step_b = (h_aa * g_b - h_ab * g_a) / det;

    double scale = 1.0;
    bool improved = false;
    for (int back = 0; back < 20; ++back) {
      const double na = a - scale * step_a;
      const double nb = b - scale * step_b;
      const double next = nll(na, nb);
      if (next < loss - 1e-12) {
        a = na;
        b = nb;
        loss = next;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
    if (std::fabs(step_a) + std::fabs(step_b) < 1e-10) break;
  }
}

}  // namespace

Model train_svm_rbf(const SampleSet& data, const SvmHyperparams& hp,
                    std::uint64_t seed) {
  if (data.samples.empty()) throw Error(ErrorCode::EmptyData, "no training samples");
  if (!(hp.c > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
  const std::int64_t n_pos = data.count_label(1);
  if (n_pos == 0 || n_pos == std::int64_t(data.size()))
    throw Error(ErrorCode::SingleClass, "svm needs both classes present");

  SvmModel model;
  model.scaler = fit_scaler(data);
  model.cols = data.feature_names.size();
  model.gamma = hp.gamma > 0.0 ? hp.gamma : 1.0 / double(model.cols);

  std::vector<double> scaled;
  scaled.reserve(data.size() * model.cols);
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& s : data.samples) {
    const auto z = model.scaler.apply(s.features);
    scaled.insert(scaled.end(), z.begin(), z.end());
    labels.push_back(s.label);
  }

  SmoProblem problem;
  problem.n = data.size();
  problem.cols = model.cols;
  problem.x = &scaled;
  problem.y.reserve(problem.n);
  for (int y : labels) problem.y.push_back(y == 1 ? 1.0 : -1.0);
  problem.c = hp.c;
  problem.gamma = model.gamma;
  problem.alpha.assign(problem.n, 0.0);
  build_kernel(problem);

  Rng rng(stage_seed(seed, "svm-smo"));
  model.converged = smo_solve(problem, hp.tol, hp.max_passes, hp.max_iter, rng);

  std::vector<double> decision(problem.n);
  for (std::size_t i = 0; i < problem.n; ++i) decision[i] = problem.decision(i);

  model.bias = problem.b;
  for (std::size_t i = 0; i < problem.n; ++i) {
    if (problem.alpha[i] > 1e-12) {
      model.alpha_y.push_back(problem.alpha[i] * problem.y[i]);
      model.support_vectors.insert(
          model.support_vectors.end(), scaled.begin() + std::ptrdiff_t(i * model.cols),
          scaled.begin() + std::ptrdiff_t((i + 1) * model.cols));
    }
  }

  if (hp.probability) fit_platt(decision, labels, model.platt_a, model.platt_b);
  return Model(ModelKind::Svm, data.feature_names, seed, std::move(model));
}

}  // namespace wildfire
