#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sarplan/camera.hpp"
#include "sarplan/defaults.hpp"
#include "sarplan/geo.hpp"
#include "sarplan/time.hpp"

namespace sarplan::audit {

struct ManifestRecord {
    std::string image_id;
    UtcInstant timestamp{};
    std::optional<double> lat;
    std::optional<double> lon;
    std::optional<double> agl_m;
    std::optional<double> gimbal_pitch_deg;
    std::optional<double> heading_deg;
    std::string drone_id;
};

enum class ManifestFormat { csv, jsonl };
ManifestFormat manifest_format_from_string(std::string_view name);

// Every malformed row is collected before throwing, so one ParseError lists
// all of them. Duplicate image ids are errors too.
std::vector<ManifestRecord> load_manifest(std::string_view text, ManifestFormat format);
// One manifest row as a JSON object (JSONL line or API body element).
ManifestRecord record_from_json(const nlohmann::json& row);
std::vector<ManifestRecord> records_from_json(const nlohmann::json& rows);

enum class Code { geo_missing, oblique, gsd_coarse, gsd_fine, sun_low, label, time_order };
enum class Severity { error, warning };

std::string_view to_string(Code code);
std::string_view to_string(Severity severity);
Severity severity_of(Code code);

struct Finding {
    std::string image_id;
    Code code = Code::geo_missing;
    Severity severity = Severity::error;
    std::string detail;
    std::optional<double> measured;
};

struct Thresholds {
    double nadir_tolerance_deg = defaults::kNadirToleranceDeg;
    double sun_min_elevation_deg = defaults::kSunMinElevationDeg;
    int label_sequence_digits = defaults::kLabelSequenceDigits;
    double coverage_cell_m = defaults::kCoverageCellM;
};

void validate(const Thresholds& t);
// Unknown keys are rejected; missing keys keep their defaults.
Thresholds thresholds_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Thresholds& t);

// Per-record checks. Time ordering needs the other records; see check_time_order.
std::vector<Finding> check_image(const ManifestRecord& rec, const camera::CameraModel& cam,
                                 const camera::TargetProfile& profile, const Thresholds& thresholds);
// A record is flagged when its timestamp is earlier than the previous
// manifest row from the same drone.
std::vector<Finding> check_time_order(const std::vector<ManifestRecord>& records);
bool label_matches(std::string_view image_id, std::string_view drone_id, int digits);

struct SolarPosition {
    double declination_deg = 0.0;
    double hour_angle_deg = 0.0;
    double elevation_deg = 0.0;
};

// NOAA fractional-year approximation. Throws RangeError outside 1950..2100.
SolarPosition solar_position(UtcInstant t, geo::GeoPoint p);
double solar_elevation(UtcInstant t, geo::GeoPoint p);
// Elevation from latitude, declination and hour angle (degrees).
double elevation_from_hour_angle(double lat_deg, double declination_deg, double hour_angle_deg);

struct CoverageStats {
    double cell_size_m = defaults::kCoverageCellM;
    std::size_t aoi_cells = 0;
    double fraction_ge1 = 0.0;
    double fraction_ge2 = 0.0;
    std::size_t gap_cells = 0;
    std::size_t stamped_images = 0;
    std::size_t excluded_images = 0;
};

// Rasterizes the AOI at cell_size in a frame at its bbox center and stamps the
// footprint of every nadir record with position, AGL and heading.
CoverageStats coverage_analysis(const std::vector<ManifestRecord>& records, const geo::GeoPolygon& aoi,
                                const camera::CameraModel& cam, double cell_size_m,
                                double nadir_tolerance_deg = defaults::kNadirToleranceDeg);

struct AuditReport {
    std::vector<Finding> findings; // sorted by image_id, then code
    std::optional<CoverageStats> coverage;
    std::size_t images = 0;
    std::size_t errors = 0;
    std::size_t warnings = 0;
    nlohmann::json params_echo;
};

AuditReport build_report(std::vector<Finding> findings, std::optional<CoverageStats> coverage, std::size_t images,
                         nlohmann::json params_echo);

// Every check plus coverage when an AOI is supplied.
AuditReport run_audit(const std::vector<ManifestRecord>& records, const camera::CameraModel& cam,
                      const camera::TargetProfile& profile, const Thresholds& thresholds,
                      const std::optional<geo::GeoPolygon>& aoi);

nlohmann::json to_json(const AuditReport& report);
std::string to_document(const AuditReport& report);
std::string summary_table(const AuditReport& report);

} // namespace sarplan::audit
