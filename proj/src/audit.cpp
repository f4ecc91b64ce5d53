#include "sarplan/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "sarplan/error.hpp"
#include "sarplan/georef.hpp"
#include "sarplan/text.hpp"

namespace sarplan::audit {

namespace {

constexpr std::array<Code, 7> kAllCodes{Code::geo_missing, Code::oblique, Code::gsd_coarse, Code::gsd_fine,
                                        Code::sun_low,     Code::label,   Code::time_order};

Finding make(const ManifestRecord& rec, Code code, std::string detail, std::optional<double> measured = std::nullopt)
{
    return {rec.image_id, code, severity_of(code), std::move(detail), measured};
}

} // namespace

std::string_view to_string(Code code)
{
    switch (code) {
    case Code::geo_missing: return "E-GEO-MISSING";
    case Code::oblique: return "W-OBLIQUE";
    case Code::gsd_coarse: return "W-GSD-COARSE";
    case Code::gsd_fine: return "W-GSD-FINE";
    case Code::sun_low: return "W-SUN-LOW";
    case Code::label: return "W-LABEL";
    case Code::time_order: return "W-TIME-ORDER";
    }
    return "?";
}

std::string_view to_string(Severity severity) { return severity == Severity::error ? "error" : "warning"; }

Severity severity_of(Code code) { return code == Code::geo_missing ? Severity::error : Severity::warning; }

void validate(const Thresholds& t)
{
    if (!(t.nadir_tolerance_deg >= 0.0 && t.nadir_tolerance_deg < 90.0))
        throw InvalidParameter("nadir_tolerance_deg", "nadir_tolerance_deg must lie in [0, 90)");
    if (!(t.sun_min_elevation_deg >= -90.0 && t.sun_min_elevation_deg <= 90.0))
        throw InvalidParameter("sun_min_elevation_deg", "sun_min_elevation_deg must lie in [-90, 90]");
    if (t.label_sequence_digits < 1 || t.label_sequence_digits > 12)
        throw InvalidParameter("label_sequence_digits", "label_sequence_digits must lie in [1, 12]");
    if (!(t.coverage_cell_m > 0.0) || !std::isfinite(t.coverage_cell_m))
        throw InvalidParameter("coverage_cell_m", "coverage_cell_m must be positive");
}

Thresholds thresholds_from_json(const nlohmann::json& doc)
{
    Thresholds t;
    if (doc.is_null()) return t;
    if (!doc.is_object()) throw InvalidParameter("thresholds", "thresholds must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "label_sequence_digits") {
            if (!value.is_number_integer()) throw InvalidParameter(key, key + " must be an integer");
            t.label_sequence_digits = value.get<int>();
            continue;
        }
        double* slot = key == "nadir_tolerance_deg"     ? &t.nadir_tolerance_deg
                       : key == "sun_min_elevation_deg" ? &t.sun_min_elevation_deg
                       : key == "coverage_cell_m"       ? &t.coverage_cell_m
                                                        : nullptr;
        if (!slot) throw InvalidParameter(key, "unknown threshold '" + key + "'");
        if (!value.is_number()) throw InvalidParameter(key, key + " must be a number");
        *slot = value.get<double>();
    }
    validate(t);
    return t;
}

nlohmann::json to_json(const Thresholds& t)
{
    return {{"nadir_tolerance_deg", t.nadir_tolerance_deg},
            {"sun_min_elevation_deg", t.sun_min_elevation_deg},
            {"label_sequence_digits", t.label_sequence_digits},
            {"coverage_cell_m", t.coverage_cell_m}};
}

bool label_matches(std::string_view image_id, std::string_view drone_id, int digits)
{
    if (drone_id.empty()) return false;
    if (image_id.size() != drone_id.size() + 1 + static_cast<std::size_t>(digits)) return false;
    if (image_id.substr(0, drone_id.size()) != drone_id || image_id[drone_id.size()] != '-') return false;
    const auto seq = image_id.substr(drone_id.size() + 1);
    return std::all_of(seq.begin(), seq.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<Finding> check_image(const ManifestRecord& rec, const camera::CameraModel& cam,
                                 const camera::TargetProfile& profile, const Thresholds& thresholds)
{
    std::vector<Finding> out;
    if (!rec.lat || !rec.lon) out.push_back(make(rec, Code::geo_missing, "no latitude/longitude; image cannot be placed"));

    if (rec.gimbal_pitch_deg && !georef::is_nadir(*rec.gimbal_pitch_deg, thresholds.nadir_tolerance_deg))
        out.push_back(make(rec, Code::oblique,
                           "gimbal pitch " + text::format_fixed(*rec.gimbal_pitch_deg, 1) + " deg is more than "
                               + text::format_double(thresholds.nadir_tolerance_deg) + " deg from nadir",
                           *rec.gimbal_pitch_deg));

    if (rec.agl_m) {
        const double px = camera::projected_target_px(cam, *rec.agl_m, profile.target_size_m);
        const auto band = camera::acceptable_px_band(profile);
        const auto where = "target projects to " + text::format_fixed(px, 1) + " px at " + text::format_fixed(*rec.agl_m, 1)
                           + " m AGL; band [" + text::format_double(band.min_px) + ", " + text::format_double(band.max_px)
                           + "]";
        if (px < band.min_px)
            out.push_back(make(rec, Code::gsd_coarse, where, px));
        else if (px > band.max_px)
            out.push_back(make(rec, Code::gsd_fine, where, px));
    }

    if (rec.lat && rec.lon) {
        const double elev = solar_elevation(rec.timestamp, {*rec.lat, *rec.lon});
        if (elev < thresholds.sun_min_elevation_deg)
            out.push_back(make(rec, Code::sun_low,
                               "sun elevation " + text::format_fixed(elev, 1) + " deg below "
                                   + text::format_double(thresholds.sun_min_elevation_deg) + " deg",
                               elev));
    }

    if (!label_matches(rec.image_id, rec.drone_id, thresholds.label_sequence_digits))
        out.push_back(make(rec, Code::label,
                           "image_id does not follow '" + rec.drone_id + "-"
                               + std::string(static_cast<std::size_t>(thresholds.label_sequence_digits), 'N') + "'"));
    return out;
}

std::vector<Finding> check_time_order(const std::vector<ManifestRecord>& records)
{
    std::vector<Finding> out;
    std::map<std::string, const ManifestRecord*> previous;
    for (const auto& rec : records) {
        auto [it, fresh] = previous.try_emplace(rec.drone_id, &rec);
        if (!fresh) {
            const auto& prev = *it->second;
            if (rec.timestamp < prev.timestamp) {
                const double back_s = static_cast<double>((prev.timestamp - rec.timestamp).count()) / 1000.0;
                out.push_back(make(rec, Code::time_order,
                                   "timestamp " + format_utc(rec.timestamp) + " precedes previous image '"
                                       + prev.image_id + "' of drone '" + rec.drone_id + "'",
                                   back_s));
            }
            it->second = &rec;
        }
    }
    return out;
}

AuditReport build_report(std::vector<Finding> findings, std::optional<CoverageStats> coverage, std::size_t images,
                         nlohmann::json params_echo)
{
    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        if (a.image_id != b.image_id) return a.image_id < b.image_id;
        return a.code < b.code;
    });
    AuditReport r;
    r.images = images;
    for (const auto& f : findings) (f.severity == Severity::error ? r.errors : r.warnings) += 1;
    r.findings = std::move(findings);
    r.coverage = coverage;
    r.params_echo = std::move(params_echo);
    return r;
}

AuditReport run_audit(const std::vector<ManifestRecord>& records, const camera::CameraModel& cam,
                      const camera::TargetProfile& profile, const Thresholds& thresholds,
                      const std::optional<geo::GeoPolygon>& aoi)
{
    camera::validate(profile);
    validate(thresholds);
    std::vector<std::vector<Finding>> per(records.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            per[i] = check_image(records[i], cam, profile, thresholds);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<Finding> findings;
    for (auto& v : per) findings.insert(findings.end(), v.begin(), v.end());
    auto order = check_time_order(records);
    findings.insert(findings.end(), order.begin(), order.end());

    std::optional<CoverageStats> coverage;
    if (aoi) coverage = coverage_analysis(records, *aoi, cam, thresholds.coverage_cell_m, thresholds.nadir_tolerance_deg);

    const auto band = camera::acceptable_px_band(profile);
    nlohmann::json echo = {
        {"camera", camera::to_json(cam)},
        {"target_profile", camera::to_json(profile)},
        {"px_band", {{"min_px", band.min_px}, {"max_px", band.max_px}}},
        {"thresholds", to_json(thresholds)},
        {"notes",
         {"nadir_tolerance_deg and sun_min_elevation_deg are configurable stand-ins for 'nadir' and 'mid-day'; "
          "they are not field-calibrated values",
          "coverage counts only nadir images with position, agl_m and heading_deg; footprints assume flat ground"}},
        {"defaults", defaults::table()},
    };
    return build_report(std::move(findings), coverage, records.size(), std::move(echo));
}

nlohmann::json to_json(const AuditReport& report)
{
    nlohmann::json findings = nlohmann::json::array();
    for (const auto& f : report.findings) {
        findings.push_back({{"image_id", f.image_id},
                            {"code", to_string(f.code)},
                            {"severity", to_string(f.severity)},
                            {"detail", f.detail},
                            {"measured", f.measured ? nlohmann::json(*f.measured) : nlohmann::json(nullptr)}});
    }
    nlohmann::json coverage = nullptr;
    if (report.coverage) {
        const auto& c = *report.coverage;
        coverage = {{"cell_size_m", c.cell_size_m},     {"aoi_cells", c.aoi_cells},
                    {"fraction_ge1", c.fraction_ge1},   {"fraction_ge2", c.fraction_ge2},
                    {"gap_cells", c.gap_cells},         {"stamped_images", c.stamped_images},
                    {"excluded_images", c.excluded_images}};
    }
    return {{"findings", std::move(findings)},
            {"coverage", std::move(coverage)},
            {"totals", {{"images", report.images}, {"errors", report.errors}, {"warnings", report.warnings}}},
            {"params_echo", report.params_echo}};
}

std::string to_document(const AuditReport& report) { return to_json(report).dump(2) + "\n"; }

std::string summary_table(const AuditReport& report)
{
    std::map<Code, std::size_t> counts;
    for (const auto& f : report.findings) ++counts[f.code];
    char line[160];
    std::string out;
    std::snprintf(line, sizeof line, "images %zu  errors %zu  warnings %zu\n\n", report.images, report.errors,
                  report.warnings);
    out += line;
    std::snprintf(line, sizeof line, "%-14s %-8s %6s\n", "code", "severity", "count");
    out += line;
    for (auto code : kAllCodes) {
        std::snprintf(line, sizeof line, "%-14s %-8s %6zu\n", std::string(to_string(code)).c_str(),
                      std::string(to_string(severity_of(code))).c_str(), counts[code]);
        out += line;
    }
    if (report.coverage) {
        const auto& c = *report.coverage;
        std::snprintf(line, sizeof line,
                      "\ncoverage @ %g m: >=1 %.2f%%  >=2 %.2f%%  gap cells %zu  excluded images %zu\n", c.cell_size_m,
                      100.0 * c.fraction_ge1, 100.0 * c.fraction_ge2, c.gap_cells, c.excluded_images);
        out += line;
    } else {
        out += "\ncoverage: not computed (no AOI)\n";
    }
    return out;
}

} // namespace sarplan::audit
