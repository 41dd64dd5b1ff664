#include "wildfire/temporal.hpp"

#include <algorithm>
#include <vector>

#include "wildfire/error.hpp"

namespace wildfire {

Season season_of(int month) {
  if (month < 1 || month > 12)
    throw Error(ErrorCode::InvalidMonth, "month must be in 1..12");
  return (month >= 5 && month <= 10) ? Season::Warm : Season::Cold;
}

const char* season_name(Season s) {
  return s == Season::Cold ? "cold" : "warm";
}

namespace {

const BandData::YearLayers& dynamic_layers(const BandData& band) {
  if (band.is_static())
    throw Error(ErrorCode::InvalidArgument, "operation needs a dynamic band");
  const auto& layers = band.years();
  if (layers.empty())
    throw Error(ErrorCode::EmptyBand, "dynamic band has no year layers");
  return layers;
}

}  // namespace

Grid aggregate(const BandData& band) { return aggregate(band, band.aggregation); }

Grid aggregate(const BandData& band, AggregationPolicy policy) {
  const auto& layers = dynamic_layers(band);
  const Grid& first = layers.begin()->second;
  Grid out(first.width(), first.height(), first.transform(), first.nodata());

  std::vector<double> buf;
  buf.reserve(layers.size());
  for (int r = 0; r < first.height(); ++r) {
    for (int c = 0; c < first.width(); ++c) {
      buf.clear();
      for (const auto& [year, grid] : layers) {
        (void)year;
        const double v = grid.at(r, c);
        if (!grid.is_nodata_value(v)) buf.push_back(v);
      }
      if (buf.empty()) continue;
      double v;
      if (policy == AggregationPolicy::Mean) {
        double sum = 0.0;
        for (double x : buf) sum += x;
        v = sum / double(buf.size());
      } else {
        std::sort(buf.begin(), buf.end());
        const std::size_t n = buf.size();
        v = (n % 2 == 1) ? buf[n / 2] : 0.5 * (buf[n / 2 - 1] + buf[n / 2]);
      }
      out.set(r, c, v);
    }
  }
  return out;
}

Grid anomaly(const BandData& band, int year) {
  const auto& layers = dynamic_layers(band);
  auto it = layers.find(year);
  if (it == layers.end())
    throw Error(ErrorCode::UnknownYear,
                "year " + std::to_string(year) + " not present in band");

  const Grid& target = it->second;
  Grid out(target.width(), target.height(), target.transform(), target.nodata());
  for (int r = 0; r < target.height(); ++r) {
    for (int c = 0; c < target.width(); ++c) {
      const double v = target.at(r, c);
      if (target.is_nodata_value(v)) continue;
      double sum = 0.0;
      int n = 0;
      for (const auto& [y, grid] : layers) {
        (void)y;
        const double w = grid.at(r, c);
        if (!grid.is_nodata_value(w)) {
          sum += w;
          ++n;
        }
      }
      if (n == 0) continue;
      out.set(r, c, v - sum / double(n));
    }
  }
  return out;
}

}  // namespace wildfire
