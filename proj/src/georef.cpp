#include "sarplan/georef.hpp"

#include <cmath>
#include <string>

#include "sarplan/error.hpp"
#include "sarplan/geojson.hpp"

namespace sarplan::georef {

namespace {

void require_nadir(const ImageMeta& meta, double tolerance_deg)
{
    if (!is_nadir(meta.gimbal_pitch_deg, tolerance_deg))
        throw NotGeoreferenceable("image '" + meta.image_id + "' is oblique (pitch " + std::to_string(meta.gimbal_pitch_deg)
                                  + " deg); only nadir images can be projected");
}

// Image-plane offset (meters, +x right, +y down) to ground east/north.
geo::LocalPoint rotate(double dx, double dy, double heading_deg)
{
    const double h = heading_deg * geo::kDegToRad;
    return {dx * std::cos(h) - dy * std::sin(h), -dx * std::sin(h) - dy * std::cos(h)};
}

} // namespace

void validate(const ImageMeta& meta)
{
    if (!(meta.agl_m > 0.0) || !std::isfinite(meta.agl_m)) throw InvalidParameter("agl_m", "agl_m must be positive");
    if (!(meta.heading_deg >= 0.0 && meta.heading_deg < 360.0))
        throw InvalidParameter("heading_deg", "heading_deg must lie in [0, 360)");
    if (!(meta.gimbal_pitch_deg >= -180.0 && meta.gimbal_pitch_deg <= 0.0))
        throw InvalidParameter("gimbal_pitch_deg", "gimbal_pitch_deg must lie in [-180, 0]");
    geo::make_geo_point(meta.center.lat_deg, meta.center.lon_deg);
}

bool is_nadir(double gimbal_pitch_deg, double tolerance_deg) { return std::abs(gimbal_pitch_deg + 90.0) <= tolerance_deg; }

std::array<geo::GeoPoint, 4> image_footprint(const ImageMeta& meta, const camera::CameraModel& cam,
                                             double nadir_tolerance_deg)
{
    validate(meta);
    require_nadir(meta, nadir_tolerance_deg);
    const auto fp = camera::footprint_dimensions(cam, meta.agl_m);
    const geo::LocalFrame frame(meta.center);
    const double hw = 0.5 * fp.width_m, hh = 0.5 * fp.height_m;
    return {geo::unproject(frame, rotate(-hw, -hh, meta.heading_deg)),
            geo::unproject(frame, rotate(hw, -hh, meta.heading_deg)),
            geo::unproject(frame, rotate(hw, hh, meta.heading_deg)),
            geo::unproject(frame, rotate(-hw, hh, meta.heading_deg))};
}

geo::GeoPoint pixel_to_ground(const ImageMeta& meta, const camera::CameraModel& cam, double px, double py,
                              double nadir_tolerance_deg)
{
    validate(meta);
    require_nadir(meta, nadir_tolerance_deg);
    if (!(px >= 0.0 && px < cam.image_w_px()) || !(py >= 0.0 && py < cam.image_h_px()))
        throw RangeError("pixel (" + std::to_string(px) + ", " + std::to_string(py) + ") outside the image");
    const double gsd = camera::ground_sampling_distance(cam, meta.agl_m);
    const double dx = (px - 0.5 * (cam.image_w_px() - 1)) * gsd;
    const double dy = (py - 0.5 * (cam.image_h_px() - 1)) * gsd;
    const geo::LocalFrame frame(meta.center);
    return geo::unproject(frame, rotate(dx, dy, meta.heading_deg));
}

kernels::OrientedRect footprint_rect(const geo::LocalFrame& frame, const ImageMeta& meta, const camera::CameraModel& cam)
{
    const auto fp = camera::footprint_dimensions(cam, meta.agl_m);
    return {geo::project(frame, meta.center), 0.5 * fp.width_m, 0.5 * fp.height_m, meta.heading_deg};
}

nlohmann::json footprints_geojson(const std::vector<ImageMeta>& images, const camera::CameraModel& cam)
{
    std::vector<nlohmann::json> features;
    for (const auto& meta : images) {
        if (!is_nadir(meta.gimbal_pitch_deg)) continue;
        const auto c = image_footprint(meta, cam);
        // Image order is clockwise on the ground; GeoJSON wants counterclockwise.
        const geo::GeoRing ring{c[0], c[3], c[2], c[1]};
        features.push_back(geojson::feature(geojson::polygon_geometry(ring), {{"image_id", meta.image_id}}));
    }
    return geojson::feature_collection(std::move(features));
}

} // namespace sarplan::georef
