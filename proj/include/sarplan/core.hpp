#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarplan/audit.hpp"
#include "sarplan/camera.hpp"
#include "sarplan/geo.hpp"
#include "sarplan/planner.hpp"
#include "sarplan/terrain.hpp"

// Entry points shared by the command-line tool and the HTTP service, so both
// produce the same documents from the same inputs.
namespace sarplan::core {

std::string version();

struct PlanRequest {
    geo::GeoPolygon aoi;
    camera::CameraModel camera;
    camera::TargetProfile profile;
    planner::PlanParams params;
};

// Body {aoi, camera, target_profile?, params?}. Throws InvalidParameter
// naming the offending member.
PlanRequest plan_request_from_json(const nlohmann::json& body);
planner::MissionPlan run_plan(const terrain::DemRaster& dem, const PlanRequest& request);
std::string plan_document(const terrain::DemRaster& dem, const PlanRequest& request);

struct AuditRequest {
    std::vector<audit::ManifestRecord> records;
    std::optional<geo::GeoPolygon> aoi;
    camera::CameraModel camera;
    camera::TargetProfile profile;
    audit::Thresholds thresholds;
};

// Body {manifest_rows, camera, aoi?, target_profile?, thresholds?}.
AuditRequest audit_request_from_json(const nlohmann::json& body);
audit::AuditReport run_audit(const AuditRequest& request);
std::string audit_document(const AuditRequest& request);

// Error mapping: exit status for the CLI, HTTP status and body for the service.
struct Failure {
    int exit_code = 1;
    int http_status = 400;
    std::string message;
    std::optional<std::string> field;
};

Failure classify(std::exception_ptr error);
std::string error_document(const Failure& failure);

} // namespace sarplan::core
