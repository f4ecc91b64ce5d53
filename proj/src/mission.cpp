#include <algorithm>
#include <exception>
#include <numeric>
#include <string>

#include <omp.h>

#include "sarplan/error.hpp"
#include "sarplan/planner.hpp"
#include "sarplan/text.hpp"

namespace sarplan::planner {

namespace {

nlohmann::json local_geo(const geo::LocalFrame& frame, geo::LocalPoint p)
{
    const auto g = geo::unproject(frame, p);
    return {{"e", p.east_m}, {"n", p.north_m}, {"lat", g.lat_deg}, {"lon", g.lon_deg}};
}

} // namespace

MissionPlan plan_mission(const geo::GeoPolygon& aoi, const terrain::DemRaster& dem, const camera::CameraModel& cam,
                         const camera::TargetProfile& profile, const PlanParams& params)
{
    validate(params);
    camera::validate(profile);

    MissionPlan plan;
    plan.frame = geo::LocalFrame(aoi.bbox_center());
    plan.params = params;
    plan.profile = profile;
    plan.camera = camera::to_json(cam);

    const double agl = camera::altitude_for_target(cam, profile);
    if (agl < params.min_agl_m)
        throw InfeasiblePlan("target altitude " + text::format_fixed(agl, 2) + " m AGL is below the clearance floor of "
                             + text::format_fixed(params.min_agl_m, 2) + " m");
    if (cam.non_square_pixels())
        plan.warnings.push_back("camera pixels are not square within 2%; GSD uses the sensor width");

    const double range = terrain::max_elev_range_for_gsd_tolerance(agl, params.gsd_tolerance);
    terrain::DecomposeOptions options;
    options.min_patch_cells = static_cast<std::size_t>(params.min_patch_cells);
    const auto decomposition = terrain::decompose_stairstep(dem, aoi, range, options);
    plan.unplannable_cells = decomposition.unplannable.size();
    if (!decomposition.unplannable.empty())
        plan.warnings.push_back(std::to_string(decomposition.unplannable.size())
                                + " AOI cells are unplannable (nodata or cliff faces)");

    const auto home_geo = params.home.value_or(aoi.bbox_center());
    plan.home.pos = geo::project(plan.frame, home_geo);
    try {
        plan.home.altitude_amsl_m = terrain::elevation_at(dem, home_geo);
    } catch (const RangeError&) {
        double lowest = 0.0;
        if (!decomposition.patches.empty()) {
            lowest = decomposition.patches.front().elev_min_m;
            for (const auto& p : decomposition.patches) lowest = std::min(lowest, p.elev_min_m);
        }
        plan.home.altitude_amsl_m = lowest;
        plan.warnings.push_back("home elevation not available from the DEM; using the lowest patch elevation");
    }

    const auto& patches = decomposition.patches;
    if (patches.empty()) {
        plan.warnings.push_back("AOI has no plannable terrain; plan is empty");
        return plan;
    }

    plan.patches = patches;
    plan.patch_plans.resize(patches.size());
    std::vector<std::exception_ptr> failures(patches.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < patches.size(); ++i) {
        try {
            plan.patch_plans[i] = plan_patch(patches[i], dem, plan.frame, cam, params, profile);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    for (const auto& pp : plan.patch_plans)
        if (pp.fallback_line) plan.warnings.push_back("patch " + std::to_string(pp.patch_id) + " uses a single centroid line");

    std::vector<double> durations;
    for (const auto& pp : plan.patch_plans) durations.push_back(pp.est_duration_s);
    const auto allocation = allocate_drones(durations, params.num_drones);
    plan.assignments = allocation.drone_of;

    for (int d = 0; d < params.num_drones; ++d) {
        std::vector<std::size_t> mine;
        for (std::size_t i = 0; i < plan.patch_plans.size(); ++i)
            if (allocation.drone_of[i] == d) mine.push_back(i);
        std::stable_sort(mine.begin(), mine.end(), [&](std::size_t a, std::size_t b) {
            return plan.patch_plans[a].est_duration_s > plan.patch_plans[b].est_duration_s;
        });
        std::vector<std::vector<PathPoint>> paths;
        for (std::size_t i : mine) paths.push_back(work_path(plan.patch_plans[i]));
        auto sorties = segment_sorties(paths, plan.home, params, d);
        for (auto& s : sorties) plan.sorties.push_back(std::move(s));
    }

    for (const auto& s : plan.sorties) {
        plan.totals.length_m += s.length_m;
        plan.totals.duration_s += s.duration_s;
        if (s.duration_s > params.max_sortie_s + 1e-6)
            throw InvariantViolation("sortie exceeds max_sortie_s after segmentation");
    }
    for (const auto& pp : plan.patch_plans) plan.totals.images += pp.est_images;
    plan.totals.sorties = plan.sorties.size();
    return plan;
}

nlohmann::json to_json(const MissionPlan& plan)
{
    using nlohmann::json;
    const auto& frame = plan.frame;
    json doc;
    doc["frame_origin"] = {{"lat", frame.origin().lat_deg}, {"lon", frame.origin().lon_deg}};
    doc["params_echo"] = {{"params", to_json(plan.params)},
                          {"target_profile", camera::to_json(plan.profile)},
                          {"camera", plan.camera},
                          {"defaults", defaults::table()}};
    auto home = local_geo(frame, plan.home.pos);
    home["alt_amsl_m"] = plan.home.altitude_amsl_m;
    doc["home"] = home;

    json patches = json::array();
    for (const auto& pp : plan.patch_plans) {
        json lines = json::array();
        for (const auto& line : pp.lines) {
            json triggers = json::array(), triggers_geo = json::array();
            for (const auto& t : line.triggers) {
                triggers.push_back({t.east_m, t.north_m});
                const auto g = geo::unproject(frame, t);
                triggers_geo.push_back({g.lat_deg, g.lon_deg});
            }
            lines.push_back({{"start", local_geo(frame, line.start)},
                             {"end", local_geo(frame, line.end)},
                             {"altitude_amsl_m", line.altitude_amsl_m},
                             {"triggers", std::move(triggers)},
                             {"triggers_geo", std::move(triggers_geo)}});
        }
        patches.push_back({{"id", pp.patch_id},
                           {"elev_min_m", pp.elev_min_m},
                           {"elev_max_m", pp.elev_max_m},
                           {"agl_m", pp.agl_m},
                           {"altitude_amsl_m", pp.altitude_amsl_m},
                           {"heading_deg", pp.heading_deg},
                           {"camera_pitch_deg", -90.0},
                           {"line_spacing_m", pp.line_spacing_m},
                           {"trigger_spacing_m", pp.trigger_spacing_m},
                           {"footprint_m", {{"width", pp.footprint.width_m}, {"height", pp.footprint.height_m}}},
                           {"lines", std::move(lines)},
                           {"est",
                            {{"length_m", pp.est_length_m},
                             {"duration_s", pp.est_duration_s},
                             {"images", pp.est_images}}}});
    }
    doc["patches"] = std::move(patches);

    json assignments = json::array();
    for (std::size_t i = 0; i < plan.assignments.size(); ++i)
        assignments.push_back({{"patch_id", plan.patch_plans[i].patch_id}, {"drone", plan.assignments[i]}});
    doc["assignments"] = std::move(assignments);

    json sorties = json::array();
    for (std::size_t k = 0; k < plan.sorties.size(); ++k) {
        const auto& s = plan.sorties[k];
        json wps = json::array();
        for (const auto& w : s.waypoints) {
            auto j = local_geo(frame, w.point.pos);
            j["alt_amsl_m"] = w.point.altitude_amsl_m;
            j["heading_deg"] = w.point.heading_deg;
            j["action"] = to_string(w.point.action);
            j["leg"] = to_string(w.arrived_by);
            wps.push_back(std::move(j));
        }
        sorties.push_back({{"index", k},
                           {"drone", s.drone},
                           {"duration_s", s.duration_s},
                           {"length_m", s.length_m},
                           {"turn_s", s.turn_s},
                           {"climb_s", s.climb_s},
                           {"waypoints", std::move(wps)}});
    }
    doc["sorties"] = std::move(sorties);
    doc["totals"] = {{"length_m", plan.totals.length_m},
                     {"duration_s", plan.totals.duration_s},
                     {"images", plan.totals.images},
                     {"sorties", plan.totals.sorties}};
    doc["unplannable_cells"] = plan.unplannable_cells;
    doc["warnings"] = plan.warnings;
    return doc;
}

std::string to_document(const MissionPlan& plan) { return to_json(plan).dump(2) + "\n"; }

std::vector<CsvFile> waypoint_csvs(const MissionPlan& plan)
{
    std::vector<CsvFile> files;
    std::vector<int> per_drone(static_cast<std::size_t>(std::max(1, plan.params.num_drones)), 0);
    for (const auto& s : plan.sorties) {
        const int seq = ++per_drone[static_cast<std::size_t>(s.drone)];
        CsvFile f;
        f.name = "drone" + std::to_string(s.drone) + "_sortie" + (seq < 10 ? "0" : "") + std::to_string(seq) + ".csv";
        f.content = "lat,lon,alt_amsl_m,heading_deg,action\n";
        for (const auto& w : s.waypoints) {
            if (w.point.action == WaypointAction::home) continue;
            const auto g = geo::unproject(plan.frame, w.point.pos);
            f.content += text::format_fixed(g.lat_deg, 8) + "," + text::format_fixed(g.lon_deg, 8) + ","
                         + text::format_fixed(w.point.altitude_amsl_m, 2) + ","
                         + text::format_fixed(w.point.heading_deg, 1) + "," + to_string(w.point.action) + "\n";
        }
        files.push_back(std::move(f));
    }
    return files;
}

} // namespace sarplan::planner
