#include "wildfire/vector_layer.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "wildfire/error.hpp"

namespace wildfire {

namespace {

using nlohmann::json;

XY parse_position(const json& pos) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
    throw Error(ErrorCode::MalformedJson, "position must be a [x, y] array");
  XY p{pos[0].get<double>(), pos[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw Error(ErrorCode::MalformedJson, "non-finite coordinate");
  return p;
}

std::vector<XY> parse_line(const json& coords) {
  if (!coords.is_array() || coords.size() < 2)
    throw Error(ErrorCode::MalformedJson, "LineString needs at least 2 positions");
  std::vector<XY> line;
  line.reserve(coords.size());
  for (const auto& pos : coords) line.push_back(parse_position(pos));
  return line;
}

void parse_geometry(const json& geom, VectorLayer& layer) {
  if (!geom.is_object() || !geom.contains("type"))
    throw Error(ErrorCode::MalformedJson, "geometry without type");
  const std::string type = geom["type"].get<std::string>();
  if (!geom.contains("coordinates"))
    throw Error(ErrorCode::MalformedJson, "geometry without coordinates");
  const json& coords = geom["coordinates"];

  if (type == "Point") {
    layer.points.push_back(parse_position(coords));
  } else if (type == "LineString") {
    layer.polylines.push_back(parse_line(coords));
  } else if (type == "MultiLineString") {
    if (!coords.is_array())
      throw Error(ErrorCode::MalformedJson, "MultiLineString coordinates");
    for (const auto& part : coords) layer.polylines.push_back(parse_line(part));
  } else {
    throw Error(ErrorCode::UnsupportedGeometry,
                "geometry type '" + type + "' is not supported");
  }
}

}  // namespace

VectorLayer read_vector_geojson(std::istream& in, CrsKind crs) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array())
    throw Error(ErrorCode::MalformedJson, "expected a FeatureCollection");

  VectorLayer layer;
  layer.crs = crs;
  for (const auto& feature : doc["features"]) {
    if (!feature.is_object() || feature.value("type", "") != "Feature" ||
        !feature.contains("geometry"))
      throw Error(ErrorCode::MalformedJson, "malformed feature");
    if (feature["geometry"].is_null()) continue;
    parse_geometry(feature["geometry"], layer);
  }
  return layer;
}

VectorLayer read_vector_geojson(const std::filesystem::path& path, CrsKind crs) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return read_vector_geojson(in, crs);
}

void write_vector_geojson(const VectorLayer& layer, std::ostream& out) {
  json features = json::array();
  for (const XY& p : layer.points) {
    features.push_back({{"type", "Feature"},
                        {"properties", json::object()},
                        {"geometry", {{"type", "Point"}, {"coordinates", {p.x, p.y}}}}});
  }
  for (const auto& line : layer.polylines) {
    json coords = json::array();
    for (const XY& p : line) coords.push_back({p.x, p.y});
    features.push_back({{"type", "Feature"},
                        {"properties", json::object()},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
  }
  json doc{{"type", "FeatureCollection"}, {"features", features}};
  out << doc.dump(1) << "\n";
  if (!out) throw Error(ErrorCode::IoFailure, "write failed");
}

}  // namespace wildfire
