#include "wildfire/sample_set.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wildfire/error.hpp"

namespace wildfire {

bool SampleSet::has_months() const {
  return std::any_of(samples.begin(), samples.end(),
                     [](const LabeledSample& s) { return s.month != 0; });
}

std::int64_t SampleSet::count_label(int label) const {
  return std::count_if(samples.begin(), samples.end(),
                       [label](const LabeledSample& s) { return s.label == label; });
}

std::vector<int> SampleSet::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

std::vector<double> SampleSet::feature_column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.features.at(index));
  return out;
}

bool SampleSet::is_categorical(const std::string& name) const {
  return std::find(categorical_features.begin(), categorical_features.end(), name) !=
         categorical_features.end();
}

namespace {

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

double parse_num(const std::string& s, int line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::MalformedCsv,
                "line " + std::to_string(line_no) + ": bad field '" + s + "'");
  return v;
}

}  // namespace

void write_sample_csv(const SampleSet& s, std::ostream& out,
                      const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  const bool months = s.has_months();
  out << "x,y,year";
  if (months) out << ",month";
  out << ",label";
  for (const auto& name : s.feature_names) out << ',' << name;
  out << "\n";
  for (const auto& sample : s.samples) {
    out << fmt_full(sample.x) << ',' << fmt_full(sample.y) << ',' << sample.year;
    if (months) out << ',' << sample.month;
    out << ',' << sample.label;
    for (double v : sample.features) out << ',' << fmt_full(v);
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoFailure, "sample CSV write failed");
}

void write_sample_csv(const SampleSet& s, const std::filesystem::path& path,
                      const std::string& comment) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for write");
  write_sample_csv(s, out, comment);
}

SampleSet read_sample_csv(std::istream& in) {
  SampleSet set;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool months = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);

    if (!have_header) {
      if (fields.size() < 4 || fields[0] != "x" || fields[1] != "y" ||
          fields[2] != "year")
        throw Error(ErrorCode::MalformedCsv, "header must start with x,y,year");
      std::size_t i = 3;
      if (i < fields.size() && fields[i] == "month") {
        months = true;
        ++i;
      }
      if (i >= fields.size() || fields[i] != "label")
        throw Error(ErrorCode::MalformedCsv, "header missing label column");
      ++i;
      set.feature_names.assign(fields.begin() + std::ptrdiff_t(i), fields.end());
      have_header = true;
      continue;
    }

    const std::size_t expected = 4 + (months ? 1 : 0) + set.feature_names.size();
    if (fields.size() != expected)
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(line_no) + ": wrong field count");
    LabeledSample sample;
    std::size_t i = 0;
    sample.x = parse_num(fields[i++], line_no);
    sample.y = parse_num(fields[i++], line_no);
    sample.year = int(parse_num(fields[i++], line_no));
    if (months) sample.month = int(parse_num(fields[i++], line_no));
    sample.label = int(parse_num(fields[i++], line_no));
    if (sample.label != 0 && sample.label != 1)
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(line_no) + ": label must be 0 or 1");
    for (; i < fields.size(); ++i)
      sample.features.push_back(parse_num(fields[i], line_no));
    set.samples.push_back(std::move(sample));
  }
  if (!have_header) throw Error(ErrorCode::MalformedCsv, "missing header row");
  return set;
}

SampleSet read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return read_sample_csv(in);
}

}  // namespace wildfire
