#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sarplan/geo.hpp"

namespace sarplan::geojson {

// Accepts a bare Polygon geometry, a Feature wrapping one, or a
// FeatureCollection whose first feature is a Polygon. Coordinates are
// [lon, lat]; a repeated closing coordinate is removed.
geo::GeoPolygon read_polygon(const nlohmann::json& doc);
geo::GeoPolygon read_polygon_text(const std::string& text);

// Polygon geometry object with closing coordinates re-emitted.
nlohmann::json polygon_geometry(const geo::GeoRing& exterior, const std::vector<geo::GeoRing>& holes = {});
nlohmann::json polygon_geometry(const geo::GeoPolygon& poly);

nlohmann::json feature(nlohmann::json geometry, nlohmann::json properties);
nlohmann::json feature_collection(std::vector<nlohmann::json> features);

} // namespace sarplan::geojson
