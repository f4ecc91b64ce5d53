#pragma once

#include <array>
#include <vector>

namespace sarplan::geo {

// WGS84 equatorial radius used by the local tangent-plane projection.
inline constexpr double kEarthRadiusM = 6378137.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

// Half-width of the projection validity window, degrees.
inline constexpr double kMaxProjectDeltaDeg = 0.5;
// Largest local offset accepted by unproject, meters.
inline constexpr double kMaxUnprojectM = 50000.0;

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    bool operator==(const GeoPoint&) const = default;
};

struct LocalPoint {
    double east_m = 0.0;
    double north_m = 0.0;

    bool operator==(const LocalPoint&) const = default;
};

inline LocalPoint operator+(LocalPoint a, LocalPoint b) { return {a.east_m + b.east_m, a.north_m + b.north_m}; }
inline LocalPoint operator-(LocalPoint a, LocalPoint b) { return {a.east_m - b.east_m, a.north_m - b.north_m}; }
inline LocalPoint operator*(double s, LocalPoint a) { return {s * a.east_m, s * a.north_m}; }
double distance(LocalPoint a, LocalPoint b);

// Throws InvalidParameter when lat/lon fall outside [-90,90] x [-180,180]
// or are not finite.
GeoPoint make_geo_point(double lat_deg, double lon_deg);

class LocalFrame {
public:
    explicit LocalFrame(GeoPoint origin);

    const GeoPoint& origin() const noexcept { return origin_; }
    // Meters per degree of latitude / longitude at the origin.
    double meters_per_deg_lat() const noexcept { return m_per_deg_lat_; }
    double meters_per_deg_lon() const noexcept { return m_per_deg_lon_; }

private:
    GeoPoint origin_;
    double m_per_deg_lat_;
    double m_per_deg_lon_;
};

// Equirectangular tangent-plane mapping. Throws RangeError outside the
// +-0.5 degree validity window around the frame origin.
LocalPoint project(const LocalFrame& frame, GeoPoint p);
// Exact algebraic inverse of project. Throws RangeError beyond 50 km.
GeoPoint unproject(const LocalFrame& frame, LocalPoint p);

using GeoRing = std::vector<GeoPoint>;
using LocalRing = std::vector<LocalPoint>;

// Search area in WGS84. Construction validates the rings and normalizes
// orientation: exterior counterclockwise, holes clockwise. A duplicated
// closing vertex is dropped.
class GeoPolygon {
public:
    explicit GeoPolygon(GeoRing exterior, std::vector<GeoRing> holes = {});

    const GeoRing& exterior() const noexcept { return exterior_; }
    const std::vector<GeoRing>& holes() const noexcept { return holes_; }

    // Center of the lat/lon bounding box.
    GeoPoint bbox_center() const;

private:
    GeoRing exterior_;
    std::vector<GeoRing> holes_;
};

struct LocalPolygon {
    LocalRing exterior;
    std::vector<LocalRing> holes;
};

struct LocalBox {
    double min_e = 0.0, min_n = 0.0, max_e = 0.0, max_n = 0.0;
};

LocalPolygon project(const LocalFrame& frame, const GeoPolygon& poly);
LocalBox bounding_box(const LocalPolygon& poly);

// Twice-signed shoelace area, positive for counterclockwise rings.
double signed_area(const LocalRing& ring);

// Even-odd rule over all rings; points within 1e-9 m of any edge are inside.
bool point_in_polygon(const LocalPolygon& poly, LocalPoint p);
// Exterior area minus hole areas, square meters.
double polygon_area_m2(const LocalPolygon& poly);
// Distance from p to the nearest edge of any ring.
double distance_to_boundary(const LocalPolygon& poly, LocalPoint p);

} // namespace sarplan::geo
