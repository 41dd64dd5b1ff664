#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wildfire/raster.hpp"

namespace wildfire {

enum class BandRole { Topographic, Vegetation, Climatic, Anthropogenic, Target };
enum class AggregationPolicy { Mean, Median };

/// One named parameter: either a single static grid or one grid per year.
struct BandData {
  using YearLayers = std::map<int, Grid>;

  std::variant<Grid, YearLayers> data;
  AggregationPolicy aggregation = AggregationPolicy::Mean;
  BandRole role = BandRole::Climatic;
  bool categorical = false;

  bool is_static() const { return std::holds_alternative<Grid>(data); }
  const Grid& static_grid() const { return std::get<Grid>(data); }
  const YearLayers& years() const { return std::get<YearLayers>(data); }

  static BandData make_static(Grid g, BandRole role,
                              bool categorical = false);
  static BandData make_dynamic(YearLayers layers, BandRole role,
                               AggregationPolicy aggregation);
};

/// Named, aligned band collection; every grid shares one frame.
class FeatureStack {
 public:
  using NamedBand = std::pair<std::string, BandData>;

  FeatureStack() = default;

  /// Validates frame agreement, unique names, non-empty dynamic bands.
  static FeatureStack make(std::vector<NamedBand> bands);

  std::size_t size() const { return bands_.size(); }
  const std::vector<NamedBand>& bands() const { return bands_; }
  const BandData* find(const std::string& name) const;
  std::vector<std::string> band_names() const;

  int width() const;
  int height() const;
  const GeoTransform& transform() const;
  double nodata() const;

 private:
  explicit FeatureStack(std::vector<NamedBand> bands) : bands_(std::move(bands)) {}
  const Grid& first_grid() const;

  std::vector<NamedBand> bands_;
};

}  // namespace wildfire
