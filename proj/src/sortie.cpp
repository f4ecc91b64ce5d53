#include "sarplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sarplan/error.hpp"

namespace sarplan::planner {

namespace {

double vertical_s(double from_alt, double to_alt, const PlanParams& p) { return std::abs(from_alt - to_alt) / p.climb_rate_mps; }

double leg_s(const PathPoint& pt, const Home& home, const PlanParams& p)
{
    return geo::distance(pt.pos, home.pos) / p.cruise_speed_mps + vertical_s(pt.altitude_amsl_m, home.altitude_amsl_m, p);
}

// Inter-patch legs are flown at the higher of the two patch altitudes.
double transfer_climb_s(const PathPoint& a, const PathPoint& b, const PlanParams& p)
{
    const double cruise_alt = std::max(a.altitude_amsl_m, b.altitude_amsl_m);
    return vertical_s(cruise_alt, a.altitude_amsl_m, p) + vertical_s(cruise_alt, b.altitude_amsl_m, p);
}

PathPoint lerp(const PathPoint& a, const PathPoint& b, double f)
{
    PathPoint out = b;
    out.pos = a.pos + f * (b.pos - a.pos);
    out.altitude_amsl_m = a.altitude_amsl_m;
    out.action = WaypointAction::transit;
    return out;
}

struct Node {
    PathPoint point;
    bool via_transfer = false;
};

} // namespace

const char* to_string(WaypointAction action)
{
    switch (action) {
    case WaypointAction::home: return "home";
    case WaypointAction::transit: return "transit";
    case WaypointAction::photo: return "photo";
    }
    return "?";
}

const char* to_string(LegKind kind)
{
    switch (kind) {
    case LegKind::start: return "start";
    case LegKind::outbound: return "outbound";
    case LegKind::work: return "work";
    case LegKind::transfer: return "transfer";
    case LegKind::home: return "home";
    }
    return "?";
}

double max_advance(double elapsed_s, const PathPoint& from, const PathPoint& to, const Home& home, const PlanParams& params)
{
    const double len = geo::distance(from.pos, to.pos);
    auto cost = [&](double f) {
        return elapsed_s + f * len / params.cruise_speed_mps + leg_s(lerp(from, to, f), home, params);
    };
    if (cost(0.0) > params.max_sortie_s) return 0.0;
    if (cost(1.0) <= params.max_sortie_s) return 1.0;
    // cost is nondecreasing in f: the return distance shrinks no faster than
    // the flown distance grows.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (cost(mid) <= params.max_sortie_s ? lo : hi) = mid;
    }
    return lo;
}

std::vector<Sortie> segment_sorties(const std::vector<std::vector<PathPoint>>& paths, const Home& home,
                                    const PlanParams& params, int drone)
{
    validate(params);
    std::vector<Node> nodes;
    for (const auto& path : paths) {
        for (std::size_t j = 0; j < path.size(); ++j) nodes.push_back({path[j], j == 0 && !nodes.empty()});
    }
    if (nodes.empty()) return {};

    double worst = 0.0;
    for (const auto& n : nodes) worst = std::max(worst, 2.0 * leg_s(n.point, home, params));
    if (!(worst < params.max_sortie_s))
        throw InfeasiblePlan("max_sortie_s " + std::to_string(params.max_sortie_s)
                             + " s does not exceed the round trip to the farthest plan point (" + std::to_string(worst)
                             + " s)");

    const PathPoint home_point{home.pos, home.altitude_amsl_m, 0.0, WaypointAction::home};
    std::vector<Sortie> sorties;
    Sortie cur;
    PathPoint pos;
    double elapsed = 0.0;
    bool progressed = false;
    bool have_dir = false;
    double dir_e = 0.0, dir_n = 0.0;

    auto open = [&](const PathPoint& at) {
        cur = Sortie{};
        cur.drone = drone;
        cur.waypoints.push_back({home_point, LegKind::start});
        cur.waypoints.push_back({at, LegKind::outbound});
        cur.length_m = geo::distance(home.pos, at.pos);
        cur.climb_s = vertical_s(home.altitude_amsl_m, at.altitude_amsl_m, params);
        elapsed = leg_s(at, home, params);
        pos = at;
        progressed = false;
        have_dir = false;
    };
    auto close = [&]() {
        cur.length_m += geo::distance(pos.pos, home.pos);
        cur.climb_s += vertical_s(pos.altitude_amsl_m, home.altitude_amsl_m, params);
        elapsed += leg_s(pos, home, params);
        cur.waypoints.push_back({home_point, LegKind::home});
        cur.duration_s = elapsed;
        sorties.push_back(std::move(cur));
    };

    open(nodes[0].point);
    std::size_t i = 0;
    while (i + 1 < nodes.size()) {
        const Node& next = nodes[i + 1];
        const double len = geo::distance(pos.pos, next.point.pos);
        if (next.via_transfer) {
            const double climb = transfer_climb_s(pos, next.point, params);
            const double t = len / params.cruise_speed_mps + climb;
            if (elapsed + t + leg_s(next.point, home, params) <= params.max_sortie_s) {
                elapsed += t;
                cur.length_m += len;
                cur.climb_s += climb;
                cur.waypoints.push_back({next.point, LegKind::transfer});
                pos = next.point;
                have_dir = false;
                progressed = true;
            } else {
                close();
                open(next.point);
            }
            ++i;
            continue;
        }

        double turn = 0.0;
        double ne = 0.0, nn = 0.0;
        if (len > 1e-9) {
            ne = (next.point.pos.east_m - pos.pos.east_m) / len;
            nn = (next.point.pos.north_m - pos.pos.north_m) / len;
            if (have_dir) {
                const double ang = std::acos(std::clamp(ne * dir_e + nn * dir_n, -1.0, 1.0)) * geo::kRadToDeg;
                if (ang >= defaults::kTurnThresholdDeg - 1e-9) turn = params.turn_penalty_s;
            }
        }
        const double t = len / params.cruise_speed_mps;
        auto advance = [&](const PathPoint& to, double flown, double dt) {
            elapsed += turn + dt;
            cur.turn_s += turn;
            if (turn > 0.0) ++cur.turns;
            cur.length_m += flown;
            cur.waypoints.push_back({to, LegKind::work});
            pos = to;
            if (flown > 1e-9) {
                dir_e = ne;
                dir_n = nn;
                have_dir = true;
            }
            progressed = true;
        };
        if (elapsed + turn + t + leg_s(next.point, home, params) <= params.max_sortie_s) {
            advance(next.point, len, t);
            ++i;
            continue;
        }
        const double f = max_advance(elapsed + turn, pos, next.point, home, params);
        if (f * len > 1e-6) {
            advance(lerp(pos, next.point, f), f * len, f * t);
        } else if (!progressed) {
            throw InfeasiblePlan("sortie starting at (" + std::to_string(pos.pos.east_m) + ", "
                                 + std::to_string(pos.pos.north_m) + ") cannot make progress within max_sortie_s");
        }
        close();
        open(pos);
    }
    close();
    return sorties;
}

std::vector<Sortie> segment_sorties(const PatchPlan& plan, const Home& home, const PlanParams& params)
{
    return segment_sorties(std::vector<std::vector<PathPoint>>{work_path(plan)}, home, params, 0);
}

Allocation allocate_drones(const std::vector<double>& durations, int num_drones)
{
    if (num_drones < 1) throw InvalidParameter("num_drones", "num_drones must be at least 1");
    std::vector<std::size_t> order(durations.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return durations[a] > durations[b]; });

    Allocation out;
    out.drone_of.assign(durations.size(), 0);
    out.loads.assign(static_cast<std::size_t>(num_drones), 0.0);
    for (std::size_t task : order) {
        const auto least = std::min_element(out.loads.begin(), out.loads.end()) - out.loads.begin();
        out.drone_of[task] = static_cast<int>(least);
        out.loads[static_cast<std::size_t>(least)] += durations[task];
    }
    out.makespan = *std::max_element(out.loads.begin(), out.loads.end());
    return out;
}

} // namespace sarplan::planner
