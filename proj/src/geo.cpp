#include "sarplan/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sarplan/error.hpp"

namespace sarplan::geo {

namespace {

constexpr double kBoundaryEpsM = 1e-9;

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

double ring_signed_area(const GeoRing& ring)
{
    double sum = 0.0;
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
        const auto& a = ring[i];
        const auto& b = ring[(i + 1) % n];
        sum += a.lon_deg * b.lat_deg - b.lon_deg * a.lat_deg;
    }
    return 0.5 * sum;
}

int orient(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c)
{
    const double v = cross(b.lon_deg - a.lon_deg, b.lat_deg - a.lat_deg, c.lon_deg - a.lon_deg, c.lat_deg - a.lat_deg);
    return (v > 0) - (v < 0);
}

bool on_segment(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p)
{
    return std::min(a.lon_deg, b.lon_deg) <= p.lon_deg && p.lon_deg <= std::max(a.lon_deg, b.lon_deg)
        && std::min(a.lat_deg, b.lat_deg) <= p.lat_deg && p.lat_deg <= std::max(a.lat_deg, b.lat_deg);
}

bool segments_intersect(const GeoPoint& p1, const GeoPoint& p2, const GeoPoint& q1, const GeoPoint& q2)
{
    const int o1 = orient(p1, p2, q1);
    const int o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1);
    const int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

void check_ring(GeoRing& ring, const char* what)
{
    if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
    if (ring.size() < 3) throw InvalidParameter("aoi", std::string(what) + " ring needs at least 3 distinct vertices");
    for (const auto& p : ring) make_geo_point(p.lat_deg, p.lon_deg);
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (ring[i] == ring[(i + 1) % ring.size()])
            throw InvalidParameter("aoi", std::string(what) + " ring has repeated consecutive vertices");
    }
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Adjacent edges share a vertex by construction.
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n]))
                throw InvalidParameter("aoi", std::string(what) + " ring is self-intersecting");
        }
    }
    if (ring_signed_area(ring) == 0.0) throw InvalidParameter("aoi", std::string(what) + " ring has zero area");
}

bool rings_cross(const GeoRing& a, const GeoRing& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (segments_intersect(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
    return false;
}

bool strictly_inside(const GeoRing& ring, const GeoPoint& p)
{
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const auto& a = ring[i];
        const auto& b = ring[j];
        if (orient(a, b, p) == 0 && on_segment(a, b, p)) return false;
        if ((a.lat_deg > p.lat_deg) != (b.lat_deg > p.lat_deg)) {
            const double x = a.lon_deg + (p.lat_deg - a.lat_deg) * (b.lon_deg - a.lon_deg) / (b.lat_deg - a.lat_deg);
            if (p.lon_deg < x) inside = !inside;
        }
    }
    return inside;
}

double segment_distance(LocalPoint p, LocalPoint a, LocalPoint b)
{
    const double dx = b.east_m - a.east_m;
    const double dy = b.north_m - a.north_m;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.east_m - a.east_m) * dx + (p.north_m - a.north_m) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.east_m - (a.east_m + t * dx), p.north_m - (a.north_m + t * dy));
}

} // namespace

double distance(LocalPoint a, LocalPoint b) { return std::hypot(a.east_m - b.east_m, a.north_m - b.north_m); }

GeoPoint make_geo_point(double lat_deg, double lon_deg)
{
    if (!std::isfinite(lat_deg) || lat_deg < -90.0 || lat_deg > 90.0)
        throw InvalidParameter("lat", "latitude " + std::to_string(lat_deg) + " outside [-90, 90]");
    if (!std::isfinite(lon_deg) || lon_deg < -180.0 || lon_deg > 180.0)
        throw InvalidParameter("lon", "longitude " + std::to_string(lon_deg) + " outside [-180, 180]");
    return {lat_deg, lon_deg};
}

LocalFrame::LocalFrame(GeoPoint origin)
    : origin_(make_geo_point(origin.lat_deg, origin.lon_deg))
    , m_per_deg_lat_(kDegToRad * kEarthRadiusM)
    , m_per_deg_lon_(kDegToRad * kEarthRadiusM * std::cos(origin.lat_deg * kDegToRad))
{
}

LocalPoint project(const LocalFrame& frame, GeoPoint p)
{
    const double dlat = p.lat_deg - frame.origin().lat_deg;
    const double dlon = p.lon_deg - frame.origin().lon_deg;
    if (!(std::abs(dlat) < kMaxProjectDeltaDeg) || !(std::abs(dlon) < kMaxProjectDeltaDeg))
        throw RangeError("point (" + std::to_string(p.lat_deg) + ", " + std::to_string(p.lon_deg)
                         + ") is outside the 0.5 degree projection window");
    return {dlon * frame.meters_per_deg_lon(), dlat * frame.meters_per_deg_lat()};
}

GeoPoint unproject(const LocalFrame& frame, LocalPoint p)
{
    if (!(std::abs(p.east_m) < kMaxUnprojectM) || !(std::abs(p.north_m) < kMaxUnprojectM))
        throw RangeError("local offset beyond 50 km from the frame origin");
    return {frame.origin().lat_deg + p.north_m / frame.meters_per_deg_lat(),
            frame.origin().lon_deg + p.east_m / frame.meters_per_deg_lon()};
}

GeoPolygon::GeoPolygon(GeoRing exterior, std::vector<GeoRing> holes)
    : exterior_(std::move(exterior)), holes_(std::move(holes))
{
    check_ring(exterior_, "exterior");
    if (ring_signed_area(exterior_) < 0) std::reverse(exterior_.begin(), exterior_.end());
    for (auto& hole : holes_) {
        check_ring(hole, "hole");
        if (ring_signed_area(hole) > 0) std::reverse(hole.begin(), hole.end());
        if (rings_cross(exterior_, hole)) throw InvalidParameter("aoi", "hole touches or crosses the exterior ring");
        for (const auto& p : hole)
            if (!strictly_inside(exterior_, p)) throw InvalidParameter("aoi", "hole is not strictly inside the exterior");
    }
    for (std::size_t i = 0; i < holes_.size(); ++i)
        for (std::size_t j = i + 1; j < holes_.size(); ++j)
            if (rings_cross(holes_[i], holes_[j])) throw InvalidParameter("aoi", "holes intersect each other");
}

GeoPoint GeoPolygon::bbox_center() const
{
    double min_lat = 90, max_lat = -90, min_lon = 180, max_lon = -180;
    for (const auto& p : exterior_) {
        min_lat = std::min(min_lat, p.lat_deg);
        max_lat = std::max(max_lat, p.lat_deg);
        min_lon = std::min(min_lon, p.lon_deg);
        max_lon = std::max(max_lon, p.lon_deg);
    }
    return {0.5 * (min_lat + max_lat), 0.5 * (min_lon + max_lon)};
}

LocalPolygon project(const LocalFrame& frame, const GeoPolygon& poly)
{
    LocalPolygon out;
    out.exterior.reserve(poly.exterior().size());
    for (const auto& p : poly.exterior()) out.exterior.push_back(project(frame, p));
    for (const auto& hole : poly.holes()) {
        LocalRing ring;
        ring.reserve(hole.size());
        for (const auto& p : hole) ring.push_back(project(frame, p));
        out.holes.push_back(std::move(ring));
    }
    return out;
}

LocalBox bounding_box(const LocalPolygon& poly)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    LocalBox box{inf, inf, -inf, -inf};
    for (const auto& p : poly.exterior) {
        box.min_e = std::min(box.min_e, p.east_m);
        box.min_n = std::min(box.min_n, p.north_m);
        box.max_e = std::max(box.max_e, p.east_m);
        box.max_n = std::max(box.max_n, p.north_m);
    }
    return box;
}

double signed_area(const LocalRing& ring)
{
    double sum = 0.0;
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
        const auto& a = ring[i];
        const auto& b = ring[(i + 1) % n];
        sum += a.east_m * b.north_m - b.east_m * a.north_m;
    }
    return 0.5 * sum;
}

bool point_in_polygon(const LocalPolygon& poly, LocalPoint p)
{
    if (distance_to_boundary(poly, p) <= kBoundaryEpsM) return true;
    bool inside = false;
    auto crossings = [&](const LocalRing& ring) {
        for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
            const auto& a = ring[i];
            const auto& b = ring[j];
            if ((a.north_m > p.north_m) != (b.north_m > p.north_m)) {
                const double x = a.east_m + (p.north_m - a.north_m) * (b.east_m - a.east_m) / (b.north_m - a.north_m);
                if (p.east_m < x) inside = !inside;
            }
        }
    };
    crossings(poly.exterior);
    for (const auto& hole : poly.holes) crossings(hole);
    return inside;
}

double polygon_area_m2(const LocalPolygon& poly)
{
    double area = std::abs(signed_area(poly.exterior));
    for (const auto& hole : poly.holes) area -= std::abs(signed_area(hole));
    return area;
}

double distance_to_boundary(const LocalPolygon& poly, LocalPoint p)
{
    double best = std::numeric_limits<double>::infinity();
    auto visit = [&](const LocalRing& ring) {
        for (std::size_t i = 0, n = ring.size(); i < n; ++i)
            best = std::min(best, segment_distance(p, ring[i], ring[(i + 1) % n]));
    };
    visit(poly.exterior);
    for (const auto& hole : poly.holes) visit(hole);
    return best;
}

} // namespace sarplan::geo
