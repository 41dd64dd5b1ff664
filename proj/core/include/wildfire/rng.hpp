#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace wildfire {

// Deterministic RNG helpers. std::mt19937_64 output is pinned by the
// standard, but the std distributions are not, so all draws below are
// implemented explicitly to keep seeded runs bit-identical everywhere.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal draw (Box-Muller, one value per call).
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = std::size_t(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// FNV-1a hash of a label, used to fan one master seed out into
/// independent per-stage streams.
std::uint64_t hash_label(std::string_view label);

/// SplitMix64 finalizer; decorrelates related seed values.
std::uint64_t mix_seed(std::uint64_t seed);

/// Per-stage seed: mixing a labeled hash keeps streams independent so
/// adding a stage never perturbs another stage's draws.
std::uint64_t stage_seed(std::uint64_t master, std::string_view label);

/// Per-item seed within a stage (e.g. one per forest tree).
std::uint64_t item_seed(std::uint64_t stage, std::uint64_t index);

}  // namespace wildfire
