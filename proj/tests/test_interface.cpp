#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <thread>

#include <httplib.h>

#include "harness.hpp"
#include "sarplan/core.hpp"
#include "sarplan/error.hpp"
#include "sarplan/service.hpp"
#include "sarplan/text.hpp"

using namespace sarplan;
namespace fs = std::filesystem;

namespace {

terrain::DemRaster flat() { return terrain::parse_asc_dem(harness::read_file(harness::fixture("flat.asc"))); }

nlohmann::json plan_body()
{
    return {{"aoi", nlohmann::json::parse(harness::read_file(harness::fixture("aoi_1km2.geojson")))},
            {"camera", nlohmann::json::parse(harness::read_file(harness::fixture("camera.json")))},
            {"target_profile", {{"target_size_m", 0.7}, {"bbox_mean_px", 64}, {"bbox_std_px", 23}}}};
}

int run(const std::string& args)
{
    const std::string cmd = std::string(SARPLAN_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("sarplan_it_" + std::to_string(::getpid())))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Running {
    service::Service svc;
    int port = -1;
    std::thread thread;
    explicit Running(terrain::DemRaster dem) : svc(std::move(dem))
    {
        port = svc.bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        thread = std::thread([this] { svc.listen_after_bind(); });
        svc.wait_until_ready();
    }
    ~Running()
    {
        svc.stop();
        thread.join();
    }
};

} // namespace

TEST_CASE("service: routing without sockets")
{
    const service::Service svc(flat());
    const auto health = svc.handle("GET", "/api/health", "");
    CHECK(health.status == 200);
    const auto h = nlohmann::json::parse(health.body);
    CHECK(h["status"] == "ok");
    CHECK(h["version"] == core::version());

    CHECK(svc.handle("GET", "/api/nothing", "").status == 404);

    auto body = plan_body();
    body["params"] = {{"front_overlap", 0.3}, {"side_overlap", 0.3}};
    const auto bad = svc.handle("POST", "/api/plan", body.dump());
    CHECK(bad.status == 400);
    const auto err = nlohmann::json::parse(bad.body);
    CHECK(err["error"].get<std::string>().find("[0.5, 0.9]") != std::string::npos);
    CHECK(err["field"] == "front_overlap");

    CHECK(svc.handle("POST", "/api/plan", "{not json").status == 400);
    auto extra = plan_body();
    extra["surprise"] = 1;
    CHECK(nlohmann::json::parse(svc.handle("POST", "/api/plan", extra.dump()).body)["field"] == "surprise");

    auto infeasible = plan_body();
    infeasible["params"] = {{"max_sortie_s", 5}};
    CHECK(svc.handle("POST", "/api/plan", infeasible.dump()).status == 422);

    const auto ok = svc.handle("POST", "/api/plan", plan_body().dump());
    REQUIRE(ok.status == 200);
    const auto images = nlohmann::json::parse(ok.body)["totals"]["images"].get<double>();
    CHECK(std::abs(images - 2600) <= 260);
}

TEST_CASE("service: audit endpoint")
{
    const service::Service svc(flat());
    nlohmann::json rows = nlohmann::json::array();
    const auto jsonl = harness::read_file(harness::fixture("manifest_clean.jsonl"));
    for (const auto& line : text::split_lines(jsonl))
        if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
    nlohmann::json body{{"manifest_rows", rows}, {"camera", nlohmann::json::parse(harness::read_file(harness::fixture("camera.json")))}};
    const auto r = svc.handle("POST", "/api/audit", body.dump());
    REQUIRE(r.status == 200);
    const auto doc = nlohmann::json::parse(r.body);
    CHECK(doc["totals"]["errors"] == 0);
    CHECK(doc["findings"].empty());
    CHECK(doc["coverage"].is_null());

    rows.push_back(rows[0]);
    body["manifest_rows"] = rows;
    const auto dup = svc.handle("POST", "/api/audit", body.dump());
    CHECK(dup.status == 400);
    CHECK(nlohmann::json::parse(dup.body)["field"] == "manifest_rows");
}

TEST_CASE("cli: exit codes")
{
    TempDir tmp;
    const std::string common = " --aoi " + harness::fixture("aoi_1km2.geojson") + " --camera " + harness::fixture("camera.json");
    CHECK(run("plan" + common + " --dem " + harness::fixture("flat.asc") + " --target-size 0.7 --target-px 64 --out "
              + (tmp / "plan.json"))
          == 0);
    CHECK(fs::exists(tmp / "plan.json"));
    CHECK(run("plan" + common + " --dem " + (tmp / "missing.asc")) == 1);
    CHECK(run("plan" + common + " --dem " + harness::fixture("flat.asc") + " --front-overlap 0.3") == 1);
    CHECK(run("plan" + common + " --dem " + harness::fixture("flat.asc") + " --max-sortie 5") == 2);
    CHECK(run("audit --manifest " + harness::fixture("manifest_clean.csv") + " --camera " + harness::fixture("camera.json")
              + " --out " + (tmp / "report.json"))
          == 0);
    CHECK(nlohmann::json::parse(harness::read_file(tmp / "report.json"))["totals"]["errors"] == 0);
    CHECK(run("srt-tag --srt " + harness::fixture("flight_b.srt") + " --out " + (tmp / "tags.csv")) == 0);
    CHECK(harness::read_file(tmp / "tags.csv").rfind("frame_index,video_time_ms,lat,lon,alt_m\n", 0) == 0);
}

TEST_CASE("parity: CLI plan and POST /api/plan give byte-identical documents")
{
    TempDir tmp;
    REQUIRE(run("plan --aoi " + harness::fixture("aoi_1km2.geojson") + " --dem " + harness::fixture("flat.asc")
                + " --camera " + harness::fixture("camera.json") + " --target-size 0.7 --target-px 64 --out "
                + (tmp / "plan.json"))
            == 0);
    const auto cli = harness::read_file(tmp / "plan.json");

    Running server(flat());
    httplib::Client client("127.0.0.1", server.port);
    client.set_read_timeout(60, 0);
    const auto health = client.Get("/api/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    const auto res = client.Post("/api/plan", plan_body().dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == cli);
}
