#include "sarplan/core.hpp"

#include "sarplan/error.hpp"
#include "sarplan/geojson.hpp"

#ifndef SARPLAN_VERSION
#define SARPLAN_VERSION "0.0.0"
#endif

namespace sarplan::core {

namespace {

const nlohmann::json& member(const nlohmann::json& body, const char* key)
{
    const auto it = body.find(key);
    if (it == body.end() || it->is_null()) throw InvalidParameter(key, std::string(key) + " is required");
    return *it;
}

void reject_unknown(const nlohmann::json& body, std::initializer_list<const char*> known)
{
    if (!body.is_object()) throw InvalidParameter("body", "request body must be a JSON object");
    for (const auto& [key, value] : body.items()) {
        bool ok = false;
        for (const char* k : known) ok |= key == k;
        if (!ok) throw InvalidParameter(key, "unknown request member '" + key + "'");
    }
}

camera::TargetProfile profile_member(const nlohmann::json& body)
{
    const auto it = body.find("target_profile");
    if (it == body.end() || it->is_null()) return {};
    return camera::target_profile_from_json(*it);
}

} // namespace

std::string version() { return SARPLAN_VERSION; }

PlanRequest plan_request_from_json(const nlohmann::json& body)
{
    reject_unknown(body, {"aoi", "camera", "target_profile", "params"});
    auto aoi = geojson::read_polygon(member(body, "aoi"));
    auto cam = camera::camera_from_json(member(body, "camera"));
    auto profile = profile_member(body);
    const auto params_it = body.find("params");
    auto params = planner::params_from_json(params_it == body.end() ? nlohmann::json::object() : *params_it);
    return {std::move(aoi), std::move(cam), profile, std::move(params)};
}

planner::MissionPlan run_plan(const terrain::DemRaster& dem, const PlanRequest& request)
{
    return planner::plan_mission(request.aoi, dem, request.camera, request.profile, request.params);
}

std::string plan_document(const terrain::DemRaster& dem, const PlanRequest& request)
{
    return planner::to_document(run_plan(dem, request));
}

AuditRequest audit_request_from_json(const nlohmann::json& body)
{
    reject_unknown(body, {"manifest_rows", "aoi", "camera", "target_profile", "thresholds"});
    auto records = audit::records_from_json(member(body, "manifest_rows"));
    std::optional<geo::GeoPolygon> aoi;
    if (const auto it = body.find("aoi"); it != body.end() && !it->is_null()) aoi = geojson::read_polygon(*it);
    auto cam = camera::camera_from_json(member(body, "camera"));
    auto profile = profile_member(body);
    const auto th = body.find("thresholds");
    auto thresholds = audit::thresholds_from_json(th == body.end() ? nlohmann::json(nullptr) : *th);
    return {std::move(records), std::move(aoi), std::move(cam), profile, thresholds};
}

audit::AuditReport run_audit(const AuditRequest& request)
{
    return audit::run_audit(request.records, request.camera, request.profile, request.thresholds, request.aoi);
}

std::string audit_document(const AuditRequest& request) { return audit::to_document(run_audit(request)); }

Failure classify(std::exception_ptr error)
{
    Failure f;
    try {
        std::rethrow_exception(error);
    } catch (const InvalidParameter& e) {
        f.message = e.what();
        f.field = e.field();
    } catch (const InfeasiblePlan& e) {
        f = {2, 422, e.what(), std::nullopt};
    } catch (const InvariantViolation& e) {
        f = {3, 500, e.what(), std::nullopt};
    } catch (const Error& e) {
        f.message = e.what();
    } catch (const nlohmann::json::exception& e) {
        f.message = std::string("invalid JSON: ") + e.what();
        f.field = "body";
    } catch (const std::exception& e) {
        f = {3, 500, e.what(), std::nullopt};
    } catch (...) {
        f = {3, 500, "unknown failure", std::nullopt};
    }
    return f;
}

std::string error_document(const Failure& failure)
{
    nlohmann::json doc = {{"error", failure.message},
                          {"field", failure.field ? nlohmann::json(*failure.field) : nlohmann::json(nullptr)}};
    return doc.dump(2) + "\n";
}

} // namespace sarplan::core
