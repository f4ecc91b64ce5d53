#include "sarplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "sarplan/error.hpp"
#include "sarplan/text.hpp"

namespace sarplan::planner {

namespace {

constexpr double kEps = 1e-9;

void require(bool ok, const char* field, const std::string& message)
{
    if (!ok) throw InvalidParameter(field, message);
}

double get_number(const nlohmann::json& doc, const char* key, double fallback)
{
    if (!doc.contains(key) || doc[key].is_null()) return fallback;
    if (!doc[key].is_number()) throw InvalidParameter(key, std::string("'") + key + "' must be a number");
    return doc[key].get<double>();
}

int get_int(const nlohmann::json& doc, const char* key, int fallback)
{
    const double v = get_number(doc, key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw InvalidParameter(key, std::string("'") + key + "' must be an integer");
    return static_cast<int>(v);
}

struct Direction {
    double along_e, along_n;  // unit vector of travel at the heading
    double across_e, across_n; // unit vector 90 degrees clockwise of travel
};

Direction direction_for(double heading_deg)
{
    const double h = heading_deg * geo::kDegToRad;
    return {std::sin(h), std::cos(h), std::cos(h), -std::sin(h)};
}

struct Interval {
    double lo, hi;
};

// Parameter interval of the line {a * across + t * along} inside `r`.
bool clip_to_rect(const Direction& d, double a, const Rect& r, Interval& out)
{
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    auto slab = [&](double base, double dir, double mn, double mx) {
        if (std::abs(dir) < 1e-12) return base >= mn - kEps && base <= mx + kEps;
        double t0 = (mn - base) / dir, t1 = (mx - base) / dir;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        return true;
    };
    if (!slab(a * d.across_e, d.along_e, r.min_e, r.max_e)) return false;
    if (!slab(a * d.across_n, d.along_n, r.min_n, r.max_n)) return false;
    if (hi - lo <= kEps) return false;
    out = {lo, hi};
    return true;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v)
{
    std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi); });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + kEps)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

geo::LocalPoint at(const Direction& d, double a, double t)
{
    return {a * d.across_e + t * d.along_e, a * d.across_n + t * d.along_n};
}

// Centered evenly spaced stations over [lo, hi]: max(1, ceil(L/s - 1/2)) of them.
std::vector<double> stations(double lo, double hi, double spacing)
{
    const double len = hi - lo;
    const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing - 0.5 - 1e-12)));
    const double first = lo + 0.5 * (len - static_cast<double>(count - 1) * spacing);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = first + static_cast<double>(i) * spacing;
    return out;
}

double path_length(const std::vector<FlightLine>& lines)
{
    double len = 0.0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        len += geo::distance(lines[i].start, lines[i].end);
        if (i + 1 < lines.size()) len += geo::distance(lines[i].end, lines[i + 1].start);
    }
    return len;
}

std::size_t count_turns(const std::vector<PathPoint>& path)
{
    std::size_t turns = 0;
    bool have_prev = false;
    double prev_e = 0, prev_n = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto delta = path[i + 1].pos - path[i].pos;
        const double len = std::hypot(delta.east_m, delta.north_m);
        if (len < 1e-9) continue;
        const double e = delta.east_m / len, n = delta.north_m / len;
        if (have_prev) {
            const double cosang = std::clamp(e * prev_e + n * prev_n, -1.0, 1.0);
            if (std::acos(cosang) * geo::kRadToDeg >= defaults::kTurnThresholdDeg - 1e-9) ++turns;
        }
        prev_e = e;
        prev_n = n;
        have_prev = true;
    }
    return turns;
}

} // namespace

void validate(const PlanParams& p)
{
    const std::string overlap_range = "must lie in [" + text::format_double(defaults::kMinOverlap) + ", "
                                      + text::format_double(defaults::kMaxOverlap) + "]";
    require(p.front_overlap >= defaults::kMinOverlap && p.front_overlap <= defaults::kMaxOverlap, "front_overlap",
            "front_overlap " + overlap_range);
    require(p.side_overlap >= defaults::kMinOverlap && p.side_overlap <= defaults::kMaxOverlap, "side_overlap",
            "side_overlap " + overlap_range);
    require(p.gsd_tolerance > 0.0 && p.gsd_tolerance <= 0.5, "gsd_tolerance", "gsd_tolerance must lie in (0, 0.5]");
    require(p.canopy_clearance_m > 0.0 && std::isfinite(p.canopy_clearance_m), "canopy_clearance_m",
            "canopy_clearance_m must be positive");
    require(p.cruise_speed_mps > 0.0 && std::isfinite(p.cruise_speed_mps), "cruise_speed_mps",
            "cruise_speed_mps must be positive");
    require(p.turn_penalty_s > 0.0 && std::isfinite(p.turn_penalty_s), "turn_penalty_s", "turn_penalty_s must be positive");
    require(p.climb_rate_mps > 0.0 && std::isfinite(p.climb_rate_mps), "climb_rate_mps", "climb_rate_mps must be positive");
    require(p.max_sortie_s > 0.0 && std::isfinite(p.max_sortie_s), "max_sortie_s", "max_sortie_s must be positive");
    require(p.num_drones >= 1, "num_drones", "num_drones must be at least 1");
    require(p.min_agl_m > 0.0 && std::isfinite(p.min_agl_m), "min_agl_m", "min_agl_m must be positive");
    require(p.min_patch_cells >= 1, "min_patch_cells", "min_patch_cells must be at least 1");
    if (p.heading_override_deg)
        require(std::isfinite(*p.heading_override_deg), "heading_override_deg", "heading_override_deg must be finite");
    if (p.home) geo::make_geo_point(p.home->lat_deg, p.home->lon_deg);
}

nlohmann::json to_json(const PlanParams& p)
{
    nlohmann::json doc = {
        {"front_overlap", p.front_overlap},
        {"side_overlap", p.side_overlap},
        {"gsd_tolerance", p.gsd_tolerance},
        {"canopy_clearance_m", p.canopy_clearance_m},
        {"cruise_speed_mps", p.cruise_speed_mps},
        {"turn_penalty_s", p.turn_penalty_s},
        {"climb_rate_mps", p.climb_rate_mps},
        {"max_sortie_s", p.max_sortie_s},
        {"num_drones", p.num_drones},
        {"min_agl_m", p.min_agl_m},
        {"min_patch_cells", p.min_patch_cells},
    };
    doc["heading_override_deg"] = p.heading_override_deg ? nlohmann::json(*p.heading_override_deg) : nlohmann::json();
    doc["home"] = p.home ? nlohmann::json{{"lat", p.home->lat_deg}, {"lon", p.home->lon_deg}} : nlohmann::json();
    return doc;
}

PlanParams params_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw InvalidParameter("params", "params must be a JSON object");
    static const char* kKnown[] = {"front_overlap", "side_overlap",  "gsd_tolerance",        "canopy_clearance_m",
                                   "cruise_speed_mps", "turn_penalty_s", "climb_rate_mps",   "max_sortie_s",
                                   "num_drones",    "min_agl_m",     "min_patch_cells",      "heading_override_deg",
                                   "home"};
    for (const auto& item : doc.items()) {
        if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) { return item.key() == k; })
            == std::end(kKnown))
            throw InvalidParameter(item.key(), "unknown parameter '" + item.key() + "'");
    }
    PlanParams p;
    p.front_overlap = get_number(doc, "front_overlap", p.front_overlap);
    p.side_overlap = get_number(doc, "side_overlap", p.side_overlap);
    p.gsd_tolerance = get_number(doc, "gsd_tolerance", p.gsd_tolerance);
    p.canopy_clearance_m = get_number(doc, "canopy_clearance_m", p.canopy_clearance_m);
    p.cruise_speed_mps = get_number(doc, "cruise_speed_mps", p.cruise_speed_mps);
    p.turn_penalty_s = get_number(doc, "turn_penalty_s", p.turn_penalty_s);
    p.climb_rate_mps = get_number(doc, "climb_rate_mps", p.climb_rate_mps);
    p.max_sortie_s = get_number(doc, "max_sortie_s", p.max_sortie_s);
    p.num_drones = get_int(doc, "num_drones", p.num_drones);
    p.min_agl_m = get_number(doc, "min_agl_m", p.min_agl_m);
    p.min_patch_cells = get_int(doc, "min_patch_cells", p.min_patch_cells);
    if (doc.contains("heading_override_deg") && !doc["heading_override_deg"].is_null())
        p.heading_override_deg = get_number(doc, "heading_override_deg", 0.0);
    if (doc.contains("home") && !doc["home"].is_null()) {
        const auto& h = doc["home"];
        if (!h.is_object()) throw InvalidParameter("home", "home must be an object {lat, lon}");
        if (!h.contains("lat") || !h.contains("lon")) throw InvalidParameter("home", "home needs lat and lon");
        p.home = geo::make_geo_point(get_number(h, "lat", 0.0), get_number(h, "lon", 0.0));
    }
    validate(p);
    return p;
}

PatchGeometry patch_geometry(const terrain::TerrainPatch& patch, const terrain::DemRaster& dem,
                             const geo::LocalFrame& frame)
{
    PatchGeometry g;
    g.patch_id = patch.id;
    g.elev_min_m = patch.elev_min_m;
    g.elev_max_m = patch.elev_max_m;
    const auto east = [&](double lon) { return (lon - frame.origin().lon_deg) * frame.meters_per_deg_lon(); };
    const auto north = [&](double lat) { return (lat - frame.origin().lat_deg) * frame.meters_per_deg_lat(); };
    // Cells arrive sorted by (row, col); merge consecutive columns into runs.
    for (std::size_t i = 0; i < patch.cells.size();) {
        std::size_t j = i + 1;
        while (j < patch.cells.size() && patch.cells[j].row == patch.cells[i].row
               && patch.cells[j].col == patch.cells[j - 1].col + 1)
            ++j;
        const int row = patch.cells[i].row;
        g.rects.push_back({east(dem.west(patch.cells[i].col)), north(dem.north(row + 1)),
                           east(dem.west(patch.cells[j - 1].col + 1)), north(dem.north(row))});
        i = j;
    }
    return g;
}

LineLayout layout_lines(const PatchGeometry& patch, double heading_deg, double line_spacing_m, double trigger_spacing_m)
{
    if (!(line_spacing_m > 0.0) || !(trigger_spacing_m > 0.0))
        throw InvalidParameter("spacing", "line and trigger spacing must be positive");
    LineLayout layout;
    layout.heading_deg = heading_deg;
    if (patch.rects.empty()) return layout;

    const auto d = direction_for(heading_deg);
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    for (const auto& r : patch.rects) {
        for (double e : {r.min_e, r.max_e})
            for (double n : {r.min_n, r.max_n}) {
                const double a = e * d.across_e + n * d.across_n;
                amin = std::min(amin, a);
                amax = std::max(amax, a);
            }
    }
    const double margin = 0.5 * line_spacing_m;
    std::vector<Rect> inflated;
    inflated.reserve(patch.rects.size());
    for (const auto& r : patch.rects)
        inflated.push_back({r.min_e - margin, r.min_n - margin, r.max_e + margin, r.max_n + margin});

    const auto offsets = stations(amin, amax, line_spacing_m);
    std::vector<std::vector<Interval>> per_line(offsets.size());
    const bool go_parallel = offsets.size() * inflated.size() > 4096;
#pragma omp parallel for schedule(static) if (go_parallel)
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        std::vector<Interval> hits;
        for (const auto& r : inflated) {
            Interval iv{};
            if (clip_to_rect(d, offsets[k], r, iv)) hits.push_back(iv);
        }
        per_line[k] = merge_intervals(std::move(hits));
    }

    std::size_t sweep = 0;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        if (per_line[k].empty()) continue;
        const bool reverse = (sweep++ % 2) == 1;
        std::vector<FlightLine> segs;
        for (const auto& iv : per_line[k]) {
            FlightLine line;
            line.start = at(d, offsets[k], iv.lo);
            line.end = at(d, offsets[k], iv.hi);
            for (double t : stations(iv.lo, iv.hi, trigger_spacing_m)) line.triggers.push_back(at(d, offsets[k], t));
            layout.total_length_m += iv.hi - iv.lo;
            segs.push_back(std::move(line));
        }
        if (reverse) {
            std::reverse(segs.begin(), segs.end());
            for (auto& s : segs) {
                std::swap(s.start, s.end);
                std::reverse(s.triggers.begin(), s.triggers.end());
            }
        }
        for (auto& s : segs) layout.lines.push_back(std::move(s));
    }
    return layout;
}

double choose_heading(const PatchGeometry& patch, double line_spacing_m, std::optional<double> override_deg)
{
    if (override_deg) return *override_deg;
    double best_heading = 0.0;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    double best_length = std::numeric_limits<double>::infinity();
    for (int h = 0; h < 180; h += defaults::kHeadingStepDeg) {
        // Trigger spacing does not affect line count or length.
        const auto layout = layout_lines(patch, h, line_spacing_m, line_spacing_m);
        const std::size_t count = layout.lines.size();
        const double tol = 1e-6 * std::max(1.0, best_length == std::numeric_limits<double>::infinity() ? 1.0 : best_length);
        if (count < best_count || (count == best_count && layout.total_length_m < best_length - tol)) {
            best_heading = h;
            best_count = count;
            best_length = layout.total_length_m;
        }
    }
    return best_heading;
}

PatchPlan plan_patch(const PatchGeometry& patch, const camera::CameraModel& cam, const PlanParams& params,
                     const camera::TargetProfile& profile)
{
    validate(params);
    const double agl = camera::altitude_for_target(cam, profile);
    if (agl < params.min_agl_m)
        throw InfeasiblePlan("target altitude " + std::to_string(agl) + " m AGL is below the " + std::to_string(params.min_agl_m)
                             + " m clearance floor");
    const double range_bound = terrain::max_elev_range_for_gsd_tolerance(agl, params.gsd_tolerance);
    if (patch.elev_max_m - patch.elev_min_m > range_bound + 1e-9)
        throw InvalidParameter("gsd_tolerance", "patch " + std::to_string(patch.patch_id) + " elevation range exceeds "
                                                    + std::to_string(range_bound) + " m");

    PatchPlan plan;
    plan.patch_id = patch.patch_id;
    plan.elev_min_m = patch.elev_min_m;
    plan.elev_max_m = patch.elev_max_m;
    plan.agl_m = agl;
    plan.altitude_amsl_m = patch.elev_max_m + params.canopy_clearance_m + agl;
    plan.footprint = camera::footprint_dimensions(cam, agl);
    plan.line_spacing_m = plan.footprint.width_m * (1.0 - params.side_overlap);
    plan.trigger_spacing_m = plan.footprint.height_m * (1.0 - params.front_overlap);
    plan.heading_deg = choose_heading(patch, plan.line_spacing_m, params.heading_override_deg);

    auto layout = layout_lines(patch, plan.heading_deg, plan.line_spacing_m, plan.trigger_spacing_m);
    if (layout.lines.empty() && !patch.rects.empty()) {
        // Single line through the centroid of the cell union.
        double area = 0.0, ce = 0.0, cn = 0.0;
        for (const auto& r : patch.rects) {
            const double a = (r.max_e - r.min_e) * (r.max_n - r.min_n);
            area += a;
            ce += a * 0.5 * (r.min_e + r.max_e);
            cn += a * 0.5 * (r.min_n + r.max_n);
        }
        const geo::LocalPoint c{ce / area, cn / area};
        FlightLine line;
        line.start = line.end = c;
        line.triggers.push_back(c);
        layout.lines.push_back(std::move(line));
        plan.fallback_line = true;
    }
    plan.lines = std::move(layout.lines);
    for (auto& line : plan.lines) {
        line.altitude_amsl_m = plan.altitude_amsl_m;
        plan.est_images += line.triggers.size();
    }
    const auto est = estimate_plan(plan, params);
    plan.est_length_m = est.length_m;
    plan.est_duration_s = est.duration_s;
    return plan;
}

PatchPlan plan_patch(const terrain::TerrainPatch& patch, const terrain::DemRaster& dem, const geo::LocalFrame& frame,
                     const camera::CameraModel& cam, const PlanParams& params, const camera::TargetProfile& profile)
{
    return plan_patch(patch_geometry(patch, dem, frame), cam, params, profile);
}

std::vector<PathPoint> work_path(const PatchPlan& plan)
{
    std::vector<PathPoint> path;
    for (const auto& line : plan.lines) {
        const auto delta = line.end - line.start;
        double heading = plan.heading_deg;
        if (std::hypot(delta.east_m, delta.north_m) > 1e-9) {
            heading = std::atan2(delta.east_m, delta.north_m) * geo::kRadToDeg;
            if (heading < 0) heading += 360.0;
        }
        path.push_back({line.start, line.altitude_amsl_m, heading, WaypointAction::transit});
        for (const auto& t : line.triggers) path.push_back({t, line.altitude_amsl_m, heading, WaypointAction::photo});
        path.push_back({line.end, line.altitude_amsl_m, heading, WaypointAction::transit});
    }
    return path;
}

PlanEstimate estimate_plan(const PatchPlan& plan, const PlanParams& params)
{
    PlanEstimate est;
    est.length_m = path_length(plan.lines);
    est.images = 0;
    for (const auto& line : plan.lines) est.images += line.triggers.size();
    est.turns = count_turns(work_path(plan));
    est.cruise_s = est.length_m / params.cruise_speed_mps;
    est.turn_s = params.turn_penalty_s * static_cast<double>(est.turns);
    est.climb_s = 0.0;
    est.duration_s = est.cruise_s + est.turn_s + est.climb_s;
    est.batteries = est.duration_s > 0.0 ? static_cast<std::size_t>(std::ceil(est.duration_s / params.max_sortie_s)) : 0;
    return est;
}

PlanEstimate estimate_plan(const MissionPlan& plan, const PlanParams& params)
{
    PlanEstimate est;
    for (const auto& sortie : plan.sorties) {
        est.length_m += sortie.length_m;
        est.duration_s += sortie.duration_s;
        est.turn_s += sortie.turn_s;
        est.climb_s += sortie.climb_s;
        est.turns += sortie.turns;
    }
    for (const auto& pp : plan.patch_plans)
        for (const auto& line : pp.lines) est.images += line.triggers.size();
    est.cruise_s = est.length_m / params.cruise_speed_mps;
    const auto lower = est.duration_s > 0.0 ? static_cast<std::size_t>(std::ceil(est.duration_s / params.max_sortie_s)) : 0;
    est.batteries = std::max(lower, plan.sorties.size());
    return est;
}

} // namespace sarplan::planner
