#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarplan/camera.hpp"
#include "sarplan/defaults.hpp"
#include "sarplan/geo.hpp"
#include "sarplan/kernels.hpp"
#include "sarplan/time.hpp"

namespace sarplan::georef {

struct ImageMeta {
    std::string image_id;
    geo::GeoPoint center; // geotag = ground point under the image center
    double agl_m = 0.0;
    double heading_deg = 0.0;        // clockwise from true north; image top faces this way
    double gimbal_pitch_deg = -90.0; // -90 is straight down
    UtcInstant timestamp{};
};

// Throws InvalidParameter on agl <= 0, heading outside [0, 360) or pitch outside [-180, 0].
void validate(const ImageMeta& meta);

bool is_nadir(double gimbal_pitch_deg, double tolerance_deg = defaults::kNadirToleranceDeg);

// Flat-ground footprint corners in image order: top-left, top-right,
// bottom-right, bottom-left. Throws NotGeoreferenceable for oblique images.
std::array<geo::GeoPoint, 4> image_footprint(const ImageMeta& meta, const camera::CameraModel& cam,
                                             double nadir_tolerance_deg = defaults::kNadirToleranceDeg);

// Ground position of pixel (px, py); +x right, +y down in the image.
geo::GeoPoint pixel_to_ground(const ImageMeta& meta, const camera::CameraModel& cam, double px, double py,
                              double nadir_tolerance_deg = defaults::kNadirToleranceDeg);

// Footprint rectangle in `frame` for coverage stamping.
kernels::OrientedRect footprint_rect(const geo::LocalFrame& frame, const ImageMeta& meta, const camera::CameraModel& cam);

// FeatureCollection of footprint polygons with an image_id property.
nlohmann::json footprints_geojson(const std::vector<ImageMeta>& images, const camera::CameraModel& cam);

} // namespace sarplan::georef
