// sarplan: plan surveys, audit collected imagery, geotag video frames, serve the API.
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sarplan/audit.hpp"
#include "sarplan/core.hpp"
#include "sarplan/error.hpp"
#include "sarplan/geojson.hpp"
#include "sarplan/service.hpp"
#include "sarplan/srt.hpp"
#include "sarplan/terrain.hpp"
#include "sarplan/text.hpp"

namespace fs = std::filesystem;
using namespace sarplan;

namespace {

std::string read_file(const std::string& path, const std::string& what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameter(what, "cannot read " + what + " file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const std::string& path, const std::string& what)
{
    auto doc = nlohmann::json::parse(read_file(path, what), nullptr, false);
    if (doc.is_discarded()) throw ParseError(0, what + " file '" + path + "' is not valid JSON");
    return doc;
}

void write_output(const std::optional<std::string>& path, const std::string& content)
{
    if (!path) {
        std::cout << content;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out || !(out << content)) throw InvalidParameter("out", "cannot write '" + *path + "'");
    spdlog::info("wrote {}", *path);
}

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("sarplan");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SARPLAN_LOG")) {
        const std::string level = env;
        if (level == "error" || level == "warn" || level == "info" || level == "debug")
            spdlog::set_level(spdlog::level::from_str(level));
        else
            spdlog::warn("SARPLAN_LOG='{}' not recognised; using warn", level);
    }
}

struct ProfileFlags {
    double target_size_m = defaults::kTargetSizeM;
    double bbox_mean_px = defaults::kBboxMeanPx;
    double bbox_std_px = defaults::kBboxStdPx;

    void add(CLI::App* app)
    {
        app->add_option("--target-size", target_size_m, "Target extent on the ground, meters")->capture_default_str();
        app->add_option("--target-px", bbox_mean_px, "Mean training bbox side, pixels")->capture_default_str();
        app->add_option("--target-std", bbox_std_px, "Std of training bbox side, pixels")->capture_default_str();
    }
    nlohmann::json json() const
    {
        return {{"target_size_m", target_size_m}, {"bbox_mean_px", bbox_mean_px}, {"bbox_std_px", bbox_std_px}};
    }
};

struct PlanFlags {
    std::string aoi, dem, camera;
    std::optional<std::string> params_file, out, waypoints_dir, patches_out;
    ProfileFlags profile;
    std::optional<double> front_overlap, side_overlap, gsd_tolerance, canopy, cruise, turn_penalty, climb, max_sortie,
        min_agl, heading;
    std::optional<int> drones, min_patch_cells;
    std::optional<std::string> home;
};

int run_plan(const PlanFlags& f)
{
    nlohmann::json params = f.params_file ? read_json(*f.params_file, "params") : nlohmann::json::object();
    auto set = [&](const char* key, const auto& value) {
        if (value) params[key] = *value;
    };
    set("front_overlap", f.front_overlap);
    set("side_overlap", f.side_overlap);
    set("gsd_tolerance", f.gsd_tolerance);
    set("canopy_clearance_m", f.canopy);
    set("cruise_speed_mps", f.cruise);
    set("turn_penalty_s", f.turn_penalty);
    set("climb_rate_mps", f.climb);
    set("max_sortie_s", f.max_sortie);
    set("min_agl_m", f.min_agl);
    set("heading_override_deg", f.heading);
    set("num_drones", f.drones);
    set("min_patch_cells", f.min_patch_cells);
    if (f.home) {
        const auto comma = f.home->find(',');
        const auto lat = text::parse_double(f.home->substr(0, comma));
        const auto lon = comma == std::string::npos ? std::nullopt : text::parse_double(f.home->substr(comma + 1));
        if (!lat || !lon) throw InvalidParameter("home", "--home expects LAT,LON");
        params["home"] = {{"lat", *lat}, {"lon", *lon}};
    }

    const nlohmann::json body = {{"aoi", read_json(f.aoi, "aoi")},
                                 {"camera", read_json(f.camera, "camera")},
                                 {"target_profile", f.profile.json()},
                                 {"params", params}};
    const auto dem = terrain::parse_asc_dem(read_file(f.dem, "dem"));
    const auto request = core::plan_request_from_json(body);
    const auto plan = core::run_plan(dem, request);
    for (const auto& w : plan.warnings) spdlog::warn("{}", w);
    spdlog::info("{} patches, {} sorties, {} images", plan.patch_plans.size(), plan.sorties.size(), plan.totals.images);
    write_output(f.out, planner::to_document(plan));

    if (f.waypoints_dir) {
        fs::create_directories(*f.waypoints_dir);
        for (const auto& csv : planner::waypoint_csvs(plan))
            write_output((fs::path(*f.waypoints_dir) / csv.name).string(), csv.content);
    }
    if (f.patches_out) write_output(*f.patches_out, terrain::patches_geojson(dem, plan.patches).dump(2) + "\n");
    return 0;
}

struct AuditFlags {
    std::string manifest, camera;
    std::optional<std::string> format, aoi, out;
    ProfileFlags profile;
    audit::Thresholds thresholds;
    bool summary = false;
};

int run_audit(const AuditFlags& f)
{
    std::string format = f.format.value_or(fs::path(f.manifest).extension() == ".jsonl" ? "jsonl" : "csv");
    core::AuditRequest request{
        audit::load_manifest(read_file(f.manifest, "manifest"), audit::manifest_format_from_string(format)),
        std::nullopt,
        camera::camera_from_json(read_json(f.camera, "camera")),
        camera::target_profile_from_json(f.profile.json()),
        f.thresholds,
    };
    if (f.aoi) request.aoi = geojson::read_polygon(read_json(*f.aoi, "aoi"));
    audit::validate(request.thresholds);
    const auto report = core::run_audit(request);
    write_output(f.out, audit::to_document(report));
    if (f.summary) std::cerr << audit::summary_table(report);
    return 0;
}

struct SrtFlags {
    std::string srt;
    double fps = 30.0;
    double interval_s = 1.0;
    std::optional<std::string> out;
};

int run_srt(const SrtFlags& f)
{
    const auto parsed = srt::parse_srt(read_file(f.srt, "srt"));
    if (parsed.skipped_blocks)
        spdlog::warn("{} subtitle blocks carried no recognised telemetry and were skipped", parsed.skipped_blocks);
    const auto tags = srt::geotag_frames(parsed.track, f.fps, f.interval_s);
    write_output(f.out, srt::frame_tags_csv(tags));
    return 0;
}

service::Service* g_service = nullptr;

void on_signal(int)
{
    if (g_service) g_service->stop();
}

struct ServeFlags {
    std::string dem;
    std::string host = "127.0.0.1";
    int port = 8080;
};

int run_serve(const ServeFlags& f)
{
    service::Service svc(terrain::parse_asc_dem(read_file(f.dem, "dem")));
    const int port = svc.bind(f.host, f.port);
    if (port < 0) throw InvalidParameter("port", "cannot bind " + f.host + ":" + std::to_string(f.port));
    g_service = &svc;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    spdlog::set_level(std::min(spdlog::get_level(), spdlog::level::info));
    spdlog::info("serving on http://{}:{} (dem {})", f.host, port, f.dem);
    svc.listen_after_bind();
    g_service = nullptr;
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();
    CLI::App app{"Search-area survey planning and imagery audit"};
    app.set_version_flag("--version", core::version());
    app.require_subcommand(1);

    PlanFlags pf;
    auto* plan = app.add_subcommand("plan", "Plan a survey mission over an AOI");
    plan->add_option("--aoi", pf.aoi, "AOI polygon (GeoJSON)")->required();
    plan->add_option("--dem", pf.dem, "Terrain (ESRI ASCII grid)")->required();
    plan->add_option("--camera", pf.camera, "Camera JSON")->required();
    pf.profile.add(plan);
    plan->add_option("--params", pf.params_file, "Plan parameter JSON; flags below override it");
    plan->add_option("--front-overlap", pf.front_overlap);
    plan->add_option("--side-overlap", pf.side_overlap);
    plan->add_option("--gsd-tolerance", pf.gsd_tolerance);
    plan->add_option("--canopy", pf.canopy, "Canopy clearance, meters");
    plan->add_option("--cruise-speed", pf.cruise, "m/s");
    plan->add_option("--turn-penalty", pf.turn_penalty, "seconds per turn");
    plan->add_option("--climb-rate", pf.climb, "m/s");
    plan->add_option("--max-sortie", pf.max_sortie, "Battery limit per sortie, seconds");
    plan->add_option("--min-agl", pf.min_agl, "Clearance floor, meters");
    plan->add_option("--heading", pf.heading, "Fixed line heading, degrees");
    plan->add_option("--drones", pf.drones);
    plan->add_option("--min-patch-cells", pf.min_patch_cells);
    plan->add_option("--home", pf.home, "Launch point LAT,LON");
    plan->add_option("--out", pf.out, "Plan JSON (stdout when absent)");
    plan->add_option("--waypoints-dir", pf.waypoints_dir, "Directory for per-sortie waypoint CSVs");
    plan->add_option("--patches-out", pf.patches_out, "Patch outlines (GeoJSON)");

    AuditFlags af;
    auto* aud = app.add_subcommand("audit", "Audit an image manifest");
    aud->add_option("--manifest", af.manifest, "Manifest CSV or JSONL")->required();
    aud->add_option("--format", af.format, "csv or jsonl (default from extension)");
    aud->add_option("--camera", af.camera, "Camera JSON")->required();
    aud->add_option("--aoi", af.aoi, "AOI polygon for coverage statistics");
    af.profile.add(aud);
    aud->add_option("--nadir-tolerance", af.thresholds.nadir_tolerance_deg)->capture_default_str();
    aud->add_option("--sun-min", af.thresholds.sun_min_elevation_deg, "Minimum sun elevation, degrees")
        ->capture_default_str();
    aud->add_option("--label-digits", af.thresholds.label_sequence_digits)->capture_default_str();
    aud->add_option("--cell-size", af.thresholds.coverage_cell_m, "Coverage cell, meters")->capture_default_str();
    aud->add_option("--out", af.out, "Report JSON (stdout when absent)");
    aud->add_flag("--summary", af.summary, "Print a summary table to stderr");

    SrtFlags sf;
    auto* tag = app.add_subcommand("srt-tag", "Geotag sampled video frames from .srt telemetry");
    tag->add_option("--srt", sf.srt)->required();
    tag->add_option("--fps", sf.fps, "Video frame rate")->capture_default_str();
    tag->add_option("--interval", sf.interval_s, "Sampling interval, seconds")->capture_default_str();
    tag->add_option("--out", sf.out, "Frame-tag CSV (stdout when absent)");

    ServeFlags vf;
    auto* serve = app.add_subcommand("serve", "Serve the planning API");
    serve->add_option("--dem", vf.dem, "Terrain loaded at startup")->required();
    serve->add_option("--host", vf.host)->capture_default_str();
    serve->add_option("--port", vf.port)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*plan) return run_plan(pf);
        if (*aud) return run_audit(af);
        if (*tag) return run_srt(sf);
        if (*serve) return run_serve(vf);
    } catch (...) {
        const auto failure = core::classify(std::current_exception());
        spdlog::error("{}", failure.message);
        return failure.exit_code;
    }
    return 1;
}
