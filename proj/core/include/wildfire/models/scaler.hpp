#pragma once

#include <span>
#include <vector>

#include "wildfire/sample_set.hpp"

namespace wildfire {

/// Per-feature z-score parameters (population standard deviation).
/// Zero-variance features map to 0.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // 0 marks a constant feature

  std::vector<double> apply(std::span<const double> features) const;
};

Scaler fit_scaler(const SampleSet& samples);

}  // namespace wildfire
