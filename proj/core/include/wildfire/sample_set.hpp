#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wildfire {

struct LabeledSample {
  double x = 0.0;
  double y = 0.0;
  int year = 0;
  int month = 0;  // 0 when unknown
  int label = 0;  // 1 = fire, 0 = non-fire
  std::vector<double> features;
};

struct SampleProvenance {
  int scenario = 0;
  std::uint64_t seed = 0;
  std::string role;  // "train" or "test"
  std::int64_t dropped_nodata = 0;
  std::int64_t buffer_discarded = 0;
  std::vector<std::string> masks;
};

/// Labeled point table feeding the classifiers. Feature columns are
/// shared across all samples once attached.
struct SampleSet {
  std::vector<std::string> feature_names;
  std::vector<LabeledSample> samples;
  SampleProvenance provenance;
  std::vector<std::string> categorical_features;

  std::size_t size() const { return samples.size(); }
  bool has_months() const;
  std::int64_t count_label(int label) const;
  std::vector<int> labels() const;
  /// Values of one feature column across all samples.
  std::vector<double> feature_column(std::size_t index) const;
  bool is_categorical(const std::string& name) const;
};

/// CSV columns: x,y,year[,month],label,<feature...>. The month column is
/// written only when any sample carries one. Lines starting with '#' are
/// ignored on read.
void write_sample_csv(const SampleSet& s, std::ostream& out,
                      const std::string& comment = "");
void write_sample_csv(const SampleSet& s, const std::filesystem::path& path,
                      const std::string& comment = "");
SampleSet read_sample_csv(std::istream& in);
SampleSet read_sample_csv(const std::filesystem::path& path);

}  // namespace wildfire
