#include "sarplan/geojson.hpp"

#include "sarplan/error.hpp"

namespace sarplan::geojson {

using nlohmann::json;

namespace {

geo::GeoRing read_ring(const json& coords)
{
    if (!coords.is_array()) throw InvalidParameter("aoi", "polygon ring must be an array of positions");
    geo::GeoRing ring;
    ring.reserve(coords.size());
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
            throw InvalidParameter("aoi", "position must be [lon, lat]");
        ring.push_back(geo::make_geo_point(pos[1].get<double>(), pos[0].get<double>()));
    }
    if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
    return ring;
}

json write_ring(const geo::GeoRing& ring)
{
    json out = json::array();
    for (const auto& p : ring) out.push_back({p.lon_deg, p.lat_deg});
    if (!ring.empty()) out.push_back({ring.front().lon_deg, ring.front().lat_deg});
    return out;
}

const json& find_polygon(const json& doc)
{
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string())
        throw InvalidParameter("aoi", "GeoJSON object with a \"type\" member expected");
    const auto type = doc["type"].get<std::string>();
    if (type == "Polygon") return doc;
    if (type == "Feature") {
        if (!doc.contains("geometry")) throw InvalidParameter("aoi", "Feature without geometry");
        return find_polygon(doc["geometry"]);
    }
    if (type == "FeatureCollection") {
        if (!doc.contains("features") || !doc["features"].is_array() || doc["features"].empty())
            throw InvalidParameter("aoi", "FeatureCollection has no features");
        return find_polygon(doc["features"][0]);
    }
    throw InvalidParameter("aoi", "unsupported GeoJSON type '" + type + "' (Polygon expected)");
}

} // namespace

geo::GeoPolygon read_polygon(const json& doc)
{
    const json& poly = find_polygon(doc);
    if (!poly.contains("coordinates") || !poly["coordinates"].is_array() || poly["coordinates"].empty())
        throw InvalidParameter("aoi", "Polygon without coordinates");
    const auto& rings = poly["coordinates"];
    geo::GeoRing exterior = read_ring(rings[0]);
    std::vector<geo::GeoRing> holes;
    for (std::size_t i = 1; i < rings.size(); ++i) holes.push_back(read_ring(rings[i]));
    return geo::GeoPolygon(std::move(exterior), std::move(holes));
}

geo::GeoPolygon read_polygon_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("invalid GeoJSON: ") + e.what());
    }
    return read_polygon(doc);
}

json polygon_geometry(const geo::GeoRing& exterior, const std::vector<geo::GeoRing>& holes)
{
    json coords = json::array();
    coords.push_back(write_ring(exterior));
    for (const auto& h : holes) coords.push_back(write_ring(h));
    return {{"type", "Polygon"}, {"coordinates", std::move(coords)}};
}

json polygon_geometry(const geo::GeoPolygon& poly) { return polygon_geometry(poly.exterior(), poly.holes()); }

json feature(json geometry, json properties)
{
    return {{"type", "Feature"}, {"properties", std::move(properties)}, {"geometry", std::move(geometry)}};
}

json feature_collection(std::vector<json> features)
{
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

} // namespace sarplan::geojson
