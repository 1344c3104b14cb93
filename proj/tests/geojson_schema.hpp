#pragma once

// Structural check of a FeatureCollection of labelled Point features.
// Returns an empty string when valid, otherwise the first problem found.

#include <cmath>
#include <string>

#include "json.hpp"

namespace schema {

inline std::string check_point_collection(const nlohmann::json& doc) {
  if (!doc.is_object()) return "document is not an object";
  if (doc.size() != 2 || !doc.contains("type") || !doc.contains("features")) {
    return "collection must have exactly 'type' and 'features'";
  }
  if (doc["type"] != "FeatureCollection") return "type is not FeatureCollection";
  if (!doc["features"].is_array()) return "features is not an array";
  std::size_t i = 0;
  for (const auto& f : doc["features"]) {
    const std::string at = "feature " + std::to_string(i++) + ": ";
    if (!f.is_object() || f.value("type", "") != "Feature") return at + "type is not Feature";
    if (!f.contains("geometry") || !f["geometry"].is_object()) return at + "missing geometry";
    const auto& g = f["geometry"];
    if (g.value("type", "") != "Point") return at + "geometry is not a Point";
    if (!g.contains("coordinates") || !g["coordinates"].is_array() || g["coordinates"].size() != 2) {
      return at + "coordinates must be [lon, lat]";
    }
    for (const auto& c : g["coordinates"]) {
      if (!c.is_number() || !std::isfinite(c.get<double>())) return at + "non-numeric coordinate";
    }
    const double lon = g["coordinates"][0].get<double>();
    const double lat = g["coordinates"][1].get<double>();
    if (lon < -180 || lon > 180 || lat < -90 || lat > 90) return at + "coordinate out of range";
    if (!f.contains("properties") || !f["properties"].is_object()) return at + "missing properties";
    const auto& p = f["properties"];
    if (!p.contains("cluster") || !p["cluster"].is_number_integer()) return at + "cluster must be an integer";
    if (!p.contains("noise") || !p["noise"].is_boolean()) return at + "noise must be a boolean";
    const long long cluster = p["cluster"].get<long long>();
    if (cluster < -1) return at + "cluster below -1";
    if (p["noise"].get<bool>() != (cluster == -1)) return at + "noise flag disagrees with cluster";
  }
  return {};
}

}  // namespace schema
