#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarplan/camera.hpp"
#include "sarplan/defaults.hpp"
#include "sarplan/geo.hpp"
#include "sarplan/terrain.hpp"

namespace sarplan::planner {

struct PlanParams {
    double front_overlap = defaults::kFrontOverlap;
    double side_overlap = defaults::kSideOverlap;
    double gsd_tolerance = defaults::kGsdTolerance;
    double canopy_clearance_m = defaults::kCanopyClearanceM;
    double cruise_speed_mps = defaults::kCruiseSpeedMps;
    double turn_penalty_s = defaults::kTurnPenaltyS;
    double climb_rate_mps = defaults::kClimbRateMps;
    double max_sortie_s = defaults::kMaxSortieS;
    int num_drones = 1;
    std::optional<double> heading_override_deg;
    double min_agl_m = defaults::kMinAglM;
    int min_patch_cells = defaults::kMinPatchCells;
    // Launch point; the AOI bounding-box center when absent.
    std::optional<geo::GeoPoint> home;
};

// Throws InvalidParameter naming the first offending field.
void validate(const PlanParams& params);
nlohmann::json to_json(const PlanParams& params);
// Missing keys take their defaults; the result is validated.
PlanParams params_from_json(const nlohmann::json& doc);

struct Rect {
    double min_e = 0.0, min_n = 0.0, max_e = 0.0, max_n = 0.0;
};

// Patch footprint in the local frame as a union of axis-aligned rectangles
// (row runs of DEM cells).
struct PatchGeometry {
    int patch_id = 0;
    std::vector<Rect> rects;
    double elev_min_m = 0.0;
    double elev_max_m = 0.0;
};

PatchGeometry patch_geometry(const terrain::TerrainPatch& patch, const terrain::DemRaster& dem,
                             const geo::LocalFrame& frame);

struct FlightLine {
    geo::LocalPoint start;
    geo::LocalPoint end;
    double altitude_amsl_m = 0.0;
    std::vector<geo::LocalPoint> triggers; // image centers, in flight order
};

struct PatchPlan {
    int patch_id = 0;
    double elev_min_m = 0.0;
    double elev_max_m = 0.0;
    double agl_m = 0.0;
    double altitude_amsl_m = 0.0;
    double heading_deg = 0.0; // direction of the even-numbered lines, [0, 180)
    double line_spacing_m = 0.0;
    double trigger_spacing_m = 0.0;
    camera::Footprint footprint;
    std::vector<FlightLine> lines;
    double est_length_m = 0.0;
    double est_duration_s = 0.0;
    std::size_t est_images = 0;
    bool fallback_line = false;
};

struct LineLayout {
    double heading_deg = 0.0;
    std::vector<FlightLine> lines;
    double total_length_m = 0.0;
};

// Boustrophedon sweep at the given heading. Line offsets are centered on the
// patch's across-track extent; each line is clipped to the patch inflated by
// half the line spacing and carries centered, evenly spaced triggers.
LineLayout layout_lines(const PatchGeometry& patch, double heading_deg, double line_spacing_m,
                        double trigger_spacing_m);

// Candidate headings 0, 15, ..., 165. Fewest lines wins, then shortest total
// line length, then the smallest heading. An override wins unconditionally.
double choose_heading(const PatchGeometry& patch, double line_spacing_m,
                      std::optional<double> override_deg = std::nullopt);

PatchPlan plan_patch(const PatchGeometry& patch, const camera::CameraModel& cam, const PlanParams& params,
                     const camera::TargetProfile& profile);
PatchPlan plan_patch(const terrain::TerrainPatch& patch, const terrain::DemRaster& dem, const geo::LocalFrame& frame,
                     const camera::CameraModel& cam, const PlanParams& params, const camera::TargetProfile& profile);

enum class WaypointAction { home, transit, photo };
enum class LegKind { start, outbound, work, transfer, home };

const char* to_string(WaypointAction action);
const char* to_string(LegKind kind);

struct PathPoint {
    geo::LocalPoint pos;
    double altitude_amsl_m = 0.0;
    double heading_deg = 0.0; // direction of travel on the line this point belongs to
    WaypointAction action = WaypointAction::transit;
};

// Flight path of a patch: line endpoints and triggers in flown order.
std::vector<PathPoint> work_path(const PatchPlan& plan);

struct SortieWaypoint {
    PathPoint point;
    LegKind arrived_by = LegKind::start;
};

struct Sortie {
    int drone = 0;
    std::vector<SortieWaypoint> waypoints; // home ... home
    double duration_s = 0.0; // cruise + turn + climb
    double length_m = 0.0;   // horizontal, including home transits
    double turn_s = 0.0;
    double climb_s = 0.0;
    std::size_t turns = 0;
};

struct Home {
    geo::LocalPoint pos;
    double altitude_amsl_m = 0.0;
};

// Largest fraction f of the segment from -> to that can be flown so that
// elapsed_s + f * (flight time) + return-home time stays within
// params.max_sortie_s. Returns 0 when even f = 0 does not fit.
double max_advance(double elapsed_s, const PathPoint& from, const PathPoint& to, const Home& home,
                   const PlanParams& params);

// Greedy battery segmentation of the drone's patch paths (flown in order).
// Cuts happen wherever continuing would leave too little time to return
// home; the next sortie resumes at the cut point. Throws InfeasiblePlan when
// some plan point cannot be reached and returned from within max_sortie_s.
std::vector<Sortie> segment_sorties(const std::vector<std::vector<PathPoint>>& paths, const Home& home,
                                    const PlanParams& params, int drone = 0);
std::vector<Sortie> segment_sorties(const PatchPlan& plan, const Home& home, const PlanParams& params);

struct Allocation {
    std::vector<int> drone_of;  // per input task
    std::vector<double> loads;  // per drone
    double makespan = 0.0;
};

// Longest-processing-time-first: tasks in descending duration (ties by
// index) go to the least-loaded drone (ties by lowest drone index).
Allocation allocate_drones(const std::vector<double>& durations, int num_drones);

struct Totals {
    double length_m = 0.0;
    double duration_s = 0.0;
    std::size_t images = 0;
    std::size_t sorties = 0;
};

struct MissionPlan {
    geo::LocalFrame frame{geo::GeoPoint{}};
    PlanParams params;
    camera::TargetProfile profile;
    nlohmann::json camera;
    Home home;
    std::vector<terrain::TerrainPatch> patches; // same order as patch_plans
    std::vector<PatchPlan> patch_plans;
    std::vector<int> assignments; // patch_plans index -> drone
    std::vector<Sortie> sorties;
    Totals totals;
    std::size_t unplannable_cells = 0;
    std::vector<std::string> warnings;
};

struct PlanEstimate {
    double length_m = 0.0;
    double cruise_s = 0.0;
    double turn_s = 0.0;
    double climb_s = 0.0;
    double duration_s = 0.0;
    std::size_t images = 0;
    std::size_t turns = 0;
    std::size_t batteries = 0;
};

PlanEstimate estimate_plan(const PatchPlan& plan, const PlanParams& params);
PlanEstimate estimate_plan(const MissionPlan& plan, const PlanParams& params);

MissionPlan plan_mission(const geo::GeoPolygon& aoi, const terrain::DemRaster& dem, const camera::CameraModel& cam,
                         const camera::TargetProfile& profile, const PlanParams& params);

// Mission-plan document. Every waypoint carries local meters and lat/lon.
nlohmann::json to_json(const MissionPlan& plan);
std::string to_document(const MissionPlan& plan);

struct CsvFile {
    std::string name;
    std::string content;
};

// One waypoint CSV per drone per sortie: lat,lon,alt_amsl_m,heading_deg,action.
std::vector<CsvFile> waypoint_csvs(const MissionPlan& plan);

} // namespace sarplan::planner
