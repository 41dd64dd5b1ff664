#include "wildfire/models/scaler.hpp"

#include <cmath>

#include "wildfire/error.hpp"

namespace wildfire {

std::vector<double> Scaler::apply(std::span<const double> features) const {
  if (features.size() != mean.size())
    throw Error(ErrorCode::FeatureMismatch, "scaler feature count mismatch");
  std::vector<double> out(features.size());
  for (std::size_t j = 0; j < features.size(); ++j)
    out[j] = stddev[j] > 0.0 ? (features[j] - mean[j]) / stddev[j] : 0.0;
  return out;
}

Scaler fit_scaler(const SampleSet& samples) {
  const std::size_t n = samples.size();
  const std::size_t p = samples.feature_names.size();
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "scaler needs >= 2 samples");

  Scaler s;
  s.mean.assign(p, 0.0);
  s.stddev.assign(p, 0.0);
  for (const auto& sample : samples.samples)
    for (std::size_t j = 0; j < p; ++j) s.mean[j] += sample.features[j];
  for (std::size_t j = 0; j < p; ++j) s.mean[j] /= double(n);
  for (const auto& sample : samples.samples)
    for (std::size_t j = 0; j < p; ++j) {
      const double d = sample.features[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  for (std::size_t j = 0; j < p; ++j)
    s.stddev[j] = s.stddev[j] > 0.0 ? std::sqrt(s.stddev[j] / double(n)) : 0.0;
  return s;
}

}  // namespace wildfire
