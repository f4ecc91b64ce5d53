#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "harness.hpp"
#include "oracles.hpp"
#include "sarplan/error.hpp"
#include "sarplan/geojson.hpp"
#include "sarplan/planner.hpp"

using namespace sarplan;
using namespace sarplan::planner;

namespace {

PatchGeometry box(double w, double h, double elev = 100.0)
{
    PatchGeometry g;
    g.patch_id = 1;
    g.rects.push_back({0, 0, w, h});
    g.elev_min_m = g.elev_max_m = elev;
    return g;
}

double seg_distance(geo::LocalPoint p, const FlightLine& l)
{
    return oracle::seg_dist({p.east_m, p.north_m}, {l.start.east_m, l.start.north_m}, {l.end.east_m, l.end.north_m});
}

std::vector<PathPoint> straight_path(double length_m, int steps, double alt)
{
    std::vector<PathPoint> path;
    for (int i = 0; i <= steps; ++i)
        path.push_back({{length_m * i / steps, 0.0}, alt, 90.0, i % 2 ? WaypointAction::photo : WaypointAction::transit});
    return path;
}

} // namespace

TEST_CASE("plan_patch: 240 m square with the worked camera")
{
    const auto plan = plan_patch(box(240, 240), harness::worked_camera(), PlanParams{}, harness::default_profile());
    CHECK(std::abs(plan.agl_m - 39.9) <= 0.1);
    CHECK(plan.footprint.width_m == doctest::Approx(59.9).epsilon(0.002));
    CHECK(plan.footprint.height_m == doctest::Approx(39.9).epsilon(0.002));
    CHECK(std::abs(plan.line_spacing_m - 23.9) < 0.1);
    CHECK(std::abs(plan.trigger_spacing_m - 16.0) < 0.1);
    CHECK(plan.heading_deg == 0.0);
    CHECK(plan.lines.size() == 10);
    for (const auto& l : plan.lines) {
        CHECK(l.triggers.size() >= 16);
        CHECK(l.triggers.size() <= 17);
    }
    CHECK(plan.altitude_amsl_m == doctest::Approx(100.0 + 10.0 + plan.agl_m));
    std::size_t sum = 0;
    for (const auto& l : plan.lines) sum += l.triggers.size();
    CHECK(plan.est_images == sum);

    PlanParams wide;
    wide.side_overlap = 0.75;
    const auto dense = plan_patch(box(240, 240), harness::worked_camera(), wide, harness::default_profile());
    CHECK(std::abs(dense.line_spacing_m - 15.0) < 0.1);
    CHECK(dense.lines.size() == 16);
}

TEST_CASE("plan_patch: flight line invariants")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dim(5, 700), ov(0.5, 0.9), hd(0, 180);
    for (int t = 0; t < 40; ++t) {
        PlanParams p;
        p.front_overlap = ov(rng);
        p.side_overlap = ov(rng);
        if (t % 3 == 0) p.heading_override_deg = hd(rng);
        auto g = box(dim(rng), dim(rng));
        g.rects.push_back({g.rects[0].max_e, 0, g.rects[0].max_e + dim(rng), dim(rng) / 2});
        const auto plan = plan_patch(g, harness::worked_camera(), p, harness::default_profile());
        REQUIRE_FALSE(plan.lines.empty());
        for (const auto& l : plan.lines) {
            CHECK(l.altitude_amsl_m == plan.altitude_amsl_m);
            REQUIRE_FALSE(l.triggers.empty());
            for (const auto& tr : l.triggers) CHECK(seg_distance(tr, l) < 1e-6);
            for (std::size_t i = 0; i + 1 < l.triggers.size(); ++i)
                CHECK(geo::distance(l.triggers[i], l.triggers[i + 1]) <= plan.trigger_spacing_m + 1e-6);
        }
    }
}

TEST_CASE("plan_patch: tiny patch gets one line whose image covers it")
{
    const auto plan = plan_patch(box(10, 10), harness::worked_camera(), PlanParams{}, harness::default_profile());
    REQUIRE(plan.lines.size() == 1);
    REQUIRE(plan.lines[0].triggers.size() >= 1);
    const auto t = plan.lines[0].triggers[0];
    const oracle::Rect r{{t.east_m, t.north_m}, {0, 1}, plan.footprint.height_m / 2, plan.footprint.width_m / 2};
    for (auto c : {oracle::P{0, 0}, {10, 0}, {10, 10}, {0, 10}}) CHECK(r.contains(c));
}

TEST_CASE("plan_patch: errors")
{
    PlanParams p;
    p.min_agl_m = 50;
    CHECK_THROWS_AS(plan_patch(box(100, 100), harness::worked_camera(), p, harness::default_profile()), InfeasiblePlan);
    auto steep = box(100, 100);
    steep.elev_max_m = steep.elev_min_m + 30;
    CHECK_THROWS_AS(plan_patch(steep, harness::worked_camera(), PlanParams{}, harness::default_profile()), InvalidParameter);
}

TEST_CASE("choose_heading: examples")
{
    CHECK(choose_heading(box(240, 60), 23.9) == 90.0);
    CHECK(choose_heading(box(240, 240), 23.9) == 0.0);
    CHECK(choose_heading(box(240, 60), 23.9, 37.0) == 37.0);
    CHECK(choose_heading(box(60, 240), 23.9) == 0.0);
}

TEST_CASE("estimate_plan: structure")
{
    PatchPlan empty;
    const auto e = estimate_plan(empty, PlanParams{});
    CHECK(e.duration_s == 0.0);
    CHECK(e.images == 0);
    CHECK(e.batteries == 0);

    const auto plan = plan_patch(box(240, 240), harness::worked_camera(), PlanParams{}, harness::default_profile());
    PlanParams slow, fast;
    fast.cruise_speed_mps = 2 * slow.cruise_speed_mps;
    const auto a = estimate_plan(plan, slow), b = estimate_plan(plan, fast);
    CHECK(b.cruise_s == doctest::Approx(a.cruise_s / 2));
    CHECK(b.turn_s == a.turn_s);
    CHECK(a.turns == 2 * (plan.lines.size() - 1));
    CHECK(a.duration_s == doctest::Approx(a.cruise_s + a.turn_s + a.climb_s));
    CHECK(a.batteries == static_cast<std::size_t>(std::ceil(a.duration_s / slow.max_sortie_s)));
}

TEST_CASE("allocate_drones: examples")
{
    const auto a = allocate_drones({4, 3, 3, 2}, 2);
    CHECK(a.makespan == 6);
    CHECK(a.loads == std::vector<double>{6, 6});
    CHECK(oracle::brute_force_makespan({4, 3, 3, 2}, 2) == 6);

    const auto one = allocate_drones({4, 3, 3, 2}, 1);
    CHECK(one.makespan == 12);
    CHECK(one.drone_of == std::vector<int>{0, 0, 0, 0});

    const auto b = allocate_drones({5, 4, 3, 2, 2}, 2);
    CHECK(b.makespan == 9);
    CHECK(oracle::brute_force_makespan({5, 4, 3, 2, 2}, 2) == 8);
    CHECK_THROWS_AS(allocate_drones({1}, 0), InvalidParameter);
}

TEST_CASE("property: LPT bound against brute force")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> dur(1, 100);
    std::uniform_int_distribution<int> count(1, 9);
    for (int t = 0; t < 200; ++t) {
        const int k = 2 + t % 2;
        std::vector<double> d(count(rng));
        for (auto& x : d) x = std::round(dur(rng));
        const auto a = allocate_drones(d, k);
        const double opt = oracle::brute_force_makespan(d, k);
        CHECK(a.makespan <= (4.0 / 3.0 - 1.0 / (3.0 * k)) * opt + 1e-9);
        double total = 0;
        for (double l : a.loads) total += l;
        CHECK(total == doctest::Approx(std::accumulate(d.begin(), d.end(), 0.0)));
    }
}

TEST_CASE("max_advance: 1000 m path, home at start, 10 m/s, 70 s")
{
    PlanParams p;
    p.cruise_speed_mps = 10;
    p.max_sortie_s = 70;
    const Home home{{0, 0}, 100};
    const PathPoint a{{0, 0}, 100, 90, WaypointAction::transit}, b{{1000, 0}, 100, 90, WaypointAction::transit};
    CHECK(max_advance(0.0, a, b, home, p) == doctest::Approx(0.35).epsilon(1e-9));
    CHECK(max_advance(71.0, a, b, home, p) == 0.0);
    p.max_sortie_s = 250;
    CHECK(max_advance(0.0, a, b, home, p) == 1.0);
}

TEST_CASE("segment_sorties: no-cut case and infeasibility")
{
    PlanParams p;
    p.cruise_speed_mps = 10;
    p.max_sortie_s = 1000;
    const Home home{{0, 0}, 100};
    const auto path = straight_path(1000, 10, 100);
    const auto one = segment_sorties({path}, home, p);
    REQUIRE(one.size() == 1);
    CHECK(one[0].waypoints.size() == path.size() + 2);
    CHECK(one[0].duration_s == doctest::Approx(200.0));
    CHECK(harness::conservation_error({path}, one).empty());

    p.max_sortie_s = 150; // round trip to the far end is 200 s
    CHECK_THROWS_AS(segment_sorties({path}, home, p), InfeasiblePlan);

    PlanParams q;
    q.cruise_speed_mps = 10;
    q.max_sortie_s = 30;
    CHECK_THROWS_AS(segment_sorties({std::vector<PathPoint>{{{500, 0}, 100, 0, WaypointAction::photo}}}, home, q),
                    InfeasiblePlan);
    CHECK(segment_sorties(std::vector<std::vector<PathPoint>>{}, home, q).empty());
}

TEST_CASE("segment_sorties: cuts conserve the path and respect the budget")
{
    PlanParams p;
    p.cruise_speed_mps = 10;
    p.max_sortie_s = 250;
    const Home home{{0, 0}, 100};
    std::vector<PathPoint> path;
    for (int i = 0; i < 7; ++i) path.push_back({{i % 2 ? 1000.0 : 0.0, 30.0 * i}, 100, 0, WaypointAction::photo});
    const auto s = segment_sorties({path}, home, p);
    CHECK(s.size() > 1);
    for (const auto& x : s) CHECK(x.duration_s <= p.max_sortie_s + 1e-6);
    CHECK(harness::conservation_error({path}, s).empty());
    // a cut sortie ends exactly on budget
    CHECK(s[0].duration_s == doctest::Approx(p.max_sortie_s).epsilon(1e-9));
    CHECK(s[1].waypoints[1].arrived_by == LegKind::outbound);
}

TEST_CASE("property: sortie conservation on random multi-patch paths")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> pos(-800, 800), alt(100, 180), budget(1.0, 4.0);
    for (int t = 0; t < 60; ++t) {
        std::vector<std::vector<PathPoint>> paths(1 + t % 3);
        for (auto& path : paths) {
            const double a = alt(rng);
            const int n = 3 + static_cast<int>(pos(rng) + 800) % 30;
            for (int i = 0; i < n; ++i)
                path.push_back({{pos(rng), pos(rng)}, a, 0.0, i % 2 ? WaypointAction::photo : WaypointAction::transit});
        }
        PlanParams p;
        p.cruise_speed_mps = 10;
        const Home home{{0, 0}, 95};
        double worst = 0;
        for (const auto& path : paths)
            for (const auto& q : path)
                worst = std::max(worst, 2 * (geo::distance(q.pos, home.pos) / 10 + (q.altitude_amsl_m - 95) / p.climb_rate_mps));
        p.max_sortie_s = worst * budget(rng) + 20;
        const auto s = segment_sorties(paths, home, p);
        for (const auto& x : s) CHECK(x.duration_s <= p.max_sortie_s + 1e-6);
        const auto err = harness::conservation_error(paths, s);
        CHECK_MESSAGE(err.empty(), err);
    }
}

TEST_CASE("params: JSON validation")
{
    CHECK_THROWS_WITH_AS(params_from_json(nlohmann::json{{"front_overlap", 0.3}}), doctest::Contains("[0.5, 0.9]"),
                         InvalidParameter);
    try {
        params_from_json(nlohmann::json{{"side_overlap", 0.95}});
        FAIL("accepted side_overlap 0.95");
    } catch (const InvalidParameter& e) {
        CHECK(e.field() == "side_overlap");
    }
    CHECK_THROWS_AS(params_from_json(nlohmann::json{{"bogus", 1}}), InvalidParameter);
    CHECK_THROWS_AS(params_from_json(nlohmann::json{{"num_drones", 1.5}}), InvalidParameter);
    const auto p = params_from_json(nlohmann::json{{"num_drones", 3}, {"home", {{"lat", 34.1}, {"lon", 135.9}}}});
    CHECK(p.num_drones == 3);
    CHECK(params_from_json(to_json(p)).home == p.home);
}

TEST_CASE("plan_mission: flat fixture")
{
    const auto dem = terrain::parse_asc_dem(harness::read_file(harness::fixture("flat.asc")));
    const auto aoi = geojson::read_polygon_text(harness::read_file(harness::fixture("aoi_1km2.geojson")));
    const auto plan = plan_mission(aoi, dem, harness::worked_camera(), harness::default_profile(), PlanParams{});
    REQUIRE(plan.patch_plans.size() == 1);
    CHECK(plan.assignments == std::vector<int>{0});
    CHECK(std::abs(static_cast<double>(plan.totals.images) - 2600) <= 260);
    const auto cov = harness::plan_coverage(plan, aoi);
    CHECK(cov.ge1 == cov.aoi_cells);
    CHECK(static_cast<double>(cov.interior_ge2) >= 0.99 * static_cast<double>(cov.interior_cells));

    double len = 0, dur = 0;
    for (const auto& s : plan.sorties) {
        len += s.length_m, dur += s.duration_s;
        CHECK(s.duration_s <= plan.params.max_sortie_s + 1e-6);
    }
    CHECK(plan.totals.length_m == doctest::Approx(len));
    CHECK(plan.totals.duration_s == doctest::Approx(dur));
    CHECK(plan.totals.sorties == plan.sorties.size());
    CHECK(harness::conservation_error({work_path(plan.patch_plans[0])}, plan.sorties).empty());

    CHECK(to_document(plan) == to_document(plan_mission(aoi, dem, harness::worked_camera(), harness::default_profile(), PlanParams{})));

    const auto csvs = waypoint_csvs(plan);
    REQUIRE(csvs.size() == plan.sorties.size());
    CHECK(csvs[0].name == "drone0_sortie01.csv");
    CHECK(csvs[0].content.rfind("lat,lon,alt_amsl_m,heading_deg,action\n", 0) == 0);
    std::size_t photos = 0;
    for (const auto& f : csvs)
        for (std::size_t at = f.content.find(",photo\n"); at != std::string::npos; at = f.content.find(",photo\n", at + 1))
            ++photos;
    CHECK(photos == plan.totals.images);
}

TEST_CASE("plan_mission: unplannable AOI yields an empty plan with a warning")
{
    const auto dem = harness::dem_around(34.1, 135.9, 20, 20, 0.0001, std::vector<double>(400, -9999));
    const geo::GeoPolygon aoi({{34.0995, 135.8995}, {34.0995, 135.9005}, {34.1005, 135.9005}, {34.1005, 135.8995}});
    const auto plan = plan_mission(aoi, dem, harness::worked_camera(), harness::default_profile(), PlanParams{});
    CHECK(plan.patch_plans.empty());
    CHECK(plan.sorties.empty());
    CHECK(plan.totals.images == 0);
    CHECK_FALSE(plan.warnings.empty());
}

TEST_CASE("plan_mission: two-level terrain flies two altitudes 30 m apart")
{
    const int rows = 20, cols = 30;
    std::vector<double> v(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) v[r * cols + c] = c < cols / 2 ? 100.0 : 130.0;
    const auto dem = harness::dem_around(34.1, 135.9, rows, cols, 0.0001, v);
    const double d = 0.00095, e = 0.00145;
    const geo::GeoPolygon aoi({{34.1 - d, 135.9 - e}, {34.1 - d, 135.9 + e}, {34.1 + d, 135.9 + e}, {34.1 + d, 135.9 - e}});
    PlanParams p;
    p.num_drones = 2;
    const auto plan = plan_mission(aoi, dem, harness::worked_camera(), harness::default_profile(), p);
    REQUIRE(plan.patch_plans.size() == 2);
    CHECK(std::abs(plan.patch_plans[0].altitude_amsl_m - plan.patch_plans[1].altitude_amsl_m) == doctest::Approx(30.0));
    CHECK(plan.assignments[0] != plan.assignments[1]);
}

TEST_CASE("property: altitude safety and AGL band on mountain terrain")
{
    std::mt19937_64 rng(14);
    const auto cam = harness::worked_camera();
    const auto prof = harness::default_profile();
    const auto band = camera::acceptable_px_band(prof);
    for (int t = 0; t < 3; ++t) {
        const int n = 60;
        const auto dem = harness::dem_around(34.1, 135.9, n, n, 0.0001, oracle::mountains(rng, n, n, 60));
        const double d = 0.0025;
        const geo::GeoPolygon aoi({{34.1 - d, 135.9 - d}, {34.1 - d, 135.9 + d}, {34.1 + d, 135.9 + d}, {34.1 + d, 135.9 - d}});
        PlanParams p;
        p.max_sortie_s = 3600;
        const auto plan = plan_mission(aoi, dem, cam, prof, p);
        REQUIRE_FALSE(plan.patch_plans.empty());
        for (std::size_t i = 0; i < plan.patch_plans.size(); ++i) {
            const auto& pp = plan.patch_plans[i];
            std::set<std::pair<int, int>> own;
            for (const auto& c : plan.patches[i].cells) own.insert({c.row, c.col});
            for (const auto& l : pp.lines) {
                const double len = geo::distance(l.start, l.end);
                const int steps = std::max(1, static_cast<int>(len / 10.0));
                for (int s = 0; s <= steps; ++s) {
                    const auto q = geo::unproject(plan.frame, l.start + (double(s) / steps) * (l.end - l.start));
                    const int col = static_cast<int>(std::floor((q.lon_deg - dem.xllcorner()) / dem.cellsize()));
                    const int row = dem.nrows() - 1 - static_cast<int>(std::floor((q.lat_deg - dem.yllcorner()) / dem.cellsize()));
                    if (!own.count({row, col})) continue;
                    const double ground = dem.at(row, col);
                    CHECK(pp.altitude_amsl_m - ground >= p.canopy_clearance_m + pp.agl_m - 1e-9);
                    const double agl = pp.altitude_amsl_m - p.canopy_clearance_m - ground;
                    CHECK(agl <= pp.agl_m * (1 + p.gsd_tolerance) + 1e-9);
                    const double px = camera::projected_target_px(cam, agl, prof.target_size_m);
                    CHECK(px >= band.min_px);
                    CHECK(px <= band.max_px);
                }
            }
        }
    }
}
