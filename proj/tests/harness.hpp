#pragma once

// Helpers shared by unit tests and the acceptance binary.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sarplan/camera.hpp"
#include "sarplan/geo.hpp"
#include "sarplan/planner.hpp"
#include "sarplan/terrain.hpp"

namespace harness {

using namespace sarplan;

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string fixture(const std::string& name) { return std::string(SARPLAN_FIXTURES) + "/" + name; }

inline camera::CameraModel worked_camera() { return camera::CameraModel(8.8, 13.2, 8.8, 5472, 3648); }
inline camera::TargetProfile default_profile() { return {0.7, 64, 23}; }

// rows x cols raster centered on (lat, lon).
inline terrain::DemRaster dem_around(double lat, double lon, int rows, int cols, double cell_deg,
                                     std::vector<double> values)
{
    return terrain::DemRaster(cols, rows, lon - 0.5 * cols * cell_deg, lat - 0.5 * rows * cell_deg, cell_deg, -9999,
                              std::move(values));
}

inline terrain::DemRaster flat_dem(double lat, double lon, int rows, int cols, double cell_deg, double z)
{
    return dem_around(lat, lon, rows, cols, cell_deg, std::vector<double>(static_cast<std::size_t>(rows) * cols, z));
}

// Ring in meters around (lat0, lon0) to a geographic polygon, via the oracle's formulas.
inline geo::GeoPolygon to_geo(const std::vector<oracle::P>& ring, double lat0, double lon0)
{
    geo::GeoRing out;
    for (auto p : ring) out.push_back({lat0 + oracle::deg_lat(p.y), lon0 + oracle::deg_lon(p.x, lat0)});
    return geo::GeoPolygon(out);
}

inline std::vector<oracle::P> to_local(const geo::GeoRing& ring, geo::GeoPoint origin)
{
    std::vector<oracle::P> out;
    for (auto g : ring)
        out.push_back({oracle::m_east(g.lon_deg - origin.lon_deg, origin.lat_deg), oracle::m_north(g.lat_deg - origin.lat_deg)});
    return out;
}

// Oracle footprints of every trigger: height along the direction of travel.
inline std::vector<oracle::Rect> trigger_rects(const planner::MissionPlan& plan)
{
    std::vector<oracle::Rect> rects;
    for (const auto& pp : plan.patch_plans) {
        for (const auto& line : pp.lines) {
            double de = line.end.east_m - line.start.east_m, dn = line.end.north_m - line.start.north_m;
            double len = std::hypot(de, dn);
            if (len < 1e-9) {
                const double h = pp.heading_deg * oracle::kPi / 180.0;
                de = std::sin(h), dn = std::cos(h), len = 1.0;
            }
            for (const auto& t : line.triggers)
                rects.push_back({{t.east_m, t.north_m}, {de / len, dn / len}, pp.footprint.height_m / 2, pp.footprint.width_m / 2});
        }
    }
    return rects;
}

inline oracle::CoverageResult plan_coverage(const planner::MissionPlan& plan, const geo::GeoPolygon& aoi, double cell = 1.0)
{
    double spacing = 0.0;
    for (const auto& pp : plan.patch_plans) spacing = std::max({spacing, pp.line_spacing_m, pp.trigger_spacing_m});
    return oracle::rasterize_coverage(to_local(aoi.exterior(), plan.frame.origin()), trigger_rects(plan), cell, 0.5 * spacing);
}

// Empty when the sorties' work legs retrace `paths` exactly: every original
// point appears in order, photo points keep their action, and inserted cut
// points sit on the segment they split.
inline std::string conservation_error(const std::vector<std::vector<planner::PathPoint>>& paths,
                                      const std::vector<planner::Sortie>& sorties)
{
    std::vector<planner::PathPoint> orig;
    for (const auto& p : paths) orig.insert(orig.end(), p.begin(), p.end());
    std::vector<planner::PathPoint> flown;
    for (const auto& s : sorties) {
        if (s.waypoints.size() < 3) return "sortie with fewer than three waypoints";
        if (s.waypoints.front().arrived_by != planner::LegKind::start || s.waypoints.back().arrived_by != planner::LegKind::home)
            return "sortie does not start and end at home";
        for (std::size_t i = 1; i + 1 < s.waypoints.size(); ++i) {
            const auto& w = s.waypoints[i].point;
            if (!flown.empty() && flown.back().pos == w.pos) continue;
            flown.push_back(w);
        }
    }
    std::size_t k = 0; // next original index to match
    for (const auto& w : flown) {
        if (k < orig.size() && w.pos == orig[k].pos) {
            if (w.action != orig[k].action) return "action changed at original point " + std::to_string(k);
            ++k;
            continue;
        }
        if (k == 0 || k >= orig.size()) return "extra point outside the original path";
        const auto a = orig[k - 1].pos, b = orig[k].pos;
        const double seg = geo::distance(a, b);
        if (std::abs(geo::distance(a, w.pos) + geo::distance(w.pos, b) - seg) > 1e-6)
            return "cut point off segment " + std::to_string(k);
        if (w.action == planner::WaypointAction::photo) return "cut point marked photo";
    }
    if (k != orig.size()) return "missing original points from " + std::to_string(k);
    return {};
}

} // namespace harness
