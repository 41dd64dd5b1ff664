#include "wildfire/stack.hpp"

#include <set>

#include "wildfire/error.hpp"

namespace wildfire {

BandData BandData::make_static(Grid g, BandRole role, bool categorical) {
  BandData b;
  b.data = std::move(g);
  b.role = role;
  b.categorical = categorical;
  return b;
}

BandData BandData::make_dynamic(YearLayers layers, BandRole role,
                                AggregationPolicy aggregation) {
  if (layers.empty())
    throw Error(ErrorCode::EmptyBand, "dynamic band needs at least one year layer");
  BandData b;
  b.data = std::move(layers);
  b.role = role;
  b.aggregation = aggregation;
  return b;
}

FeatureStack FeatureStack::make(std::vector<NamedBand> bands) {
  if (bands.empty())
    throw Error(ErrorCode::InvalidArgument, "stack needs at least one band");

  std::set<std::string> names;
  const Grid* reference = nullptr;
  for (const auto& [name, band] : bands) {
    if (!names.insert(name).second)
      throw Error(ErrorCode::DuplicateName, "duplicate band name '" + name + "'");
    auto check = [&](const Grid& g) {
      if (reference == nullptr)
        reference = &g;
      else if (!reference->same_frame(g))
        throw Error(ErrorCode::DimensionMismatch,
                    "band '" + name + "' does not share the stack frame");
    };
    if (band.is_static()) {
      check(band.static_grid());
    } else {
      if (band.years().empty())
        throw Error(ErrorCode::EmptyBand,
                    "dynamic band '" + name + "' has no year layers");
      for (const auto& [year, grid] : band.years()) {
        (void)year;
        check(grid);
      }
    }
  }
  return FeatureStack(std::move(bands));
}

const BandData* FeatureStack::find(const std::string& name) const {
  for (const auto& [n, b] : bands_)
    if (n == name) return &b;
  return nullptr;
}

std::vector<std::string> FeatureStack::band_names() const {
  std::vector<std::string> names;
  names.reserve(bands_.size());
  for (const auto& [n, b] : bands_) names.push_back(n);
  return names;
}

const Grid& FeatureStack::first_grid() const {
  const BandData& b = bands_.front().second;
  return b.is_static() ? b.static_grid() : b.years().begin()->second;
}

int FeatureStack::width() const { return first_grid().width(); }
int FeatureStack::height() const { return first_grid().height(); }
const GeoTransform& FeatureStack::transform() const { return first_grid().transform(); }
double FeatureStack::nodata() const { return first_grid().nodata(); }

}  // namespace wildfire
