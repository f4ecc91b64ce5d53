#include "sarplan/camera.hpp"

#include <cmath>
#include <string>

#include "sarplan/error.hpp"

namespace sarplan::camera {

namespace {

void require_positive(const char* field, double v)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter(field, std::string(field) + " must be positive");
}

void require_agl(double agl_m)
{
    if (!(agl_m > 0.0) || !std::isfinite(agl_m)) throw InvalidParameter("agl_m", "altitude above ground must be positive");
}

double number(const nlohmann::json& doc, const char* key)
{
    if (!doc.contains(key)) throw InvalidParameter(key, std::string("missing key '") + key + "'");
    if (!doc[key].is_number()) throw InvalidParameter(key, std::string("'") + key + "' must be a number");
    return doc[key].get<double>();
}

int integer(const nlohmann::json& doc, const char* key)
{
    const double v = number(doc, key);
    if (v != std::floor(v) || v < 1 || v > 1e6) throw InvalidParameter(key, std::string("'") + key + "' must be a positive integer");
    return static_cast<int>(v);
}

} // namespace

CameraModel::CameraModel(double focal_mm, double sensor_w_mm, double sensor_h_mm, int image_w_px, int image_h_px,
                         std::optional<double> shutter_s)
    : focal_mm_(focal_mm), sensor_w_mm_(sensor_w_mm), sensor_h_mm_(sensor_h_mm), image_w_px_(image_w_px)
    , image_h_px_(image_h_px), shutter_s_(shutter_s)
{
    require_positive("focal_mm", focal_mm_);
    require_positive("sensor_w_mm", sensor_w_mm_);
    require_positive("sensor_h_mm", sensor_h_mm_);
    if (image_w_px_ <= 0) throw InvalidParameter("image_w_px", "image_w_px must be positive");
    if (image_h_px_ <= 0) throw InvalidParameter("image_h_px", "image_h_px must be positive");
    if (shutter_s_) require_positive("shutter_s", *shutter_s_);
    const double aspect = (sensor_w_mm_ / image_w_px_) / (sensor_h_mm_ / image_h_px_);
    non_square_ = std::abs(aspect - 1.0) > 0.02;
}

void validate(const TargetProfile& profile)
{
    require_positive("target_size_m", profile.target_size_m);
    require_positive("bbox_mean_px", profile.bbox_mean_px);
    require_positive("bbox_std_px", profile.bbox_std_px);
    if (!(profile.bbox_std_px < profile.bbox_mean_px))
        throw InvalidParameter("bbox_std_px", "bbox_std_px must be smaller than bbox_mean_px");
}

double ground_sampling_distance(const CameraModel& cam, double agl_m)
{
    require_agl(agl_m);
    return (cam.sensor_w_mm() / 1000.0 * agl_m) / (cam.focal_mm() / 1000.0 * cam.image_w_px());
}

double ground_sampling_distance_vertical(const CameraModel& cam, double agl_m)
{
    require_agl(agl_m);
    return (cam.sensor_h_mm() / 1000.0 * agl_m) / (cam.focal_mm() / 1000.0 * cam.image_h_px());
}

Footprint footprint_dimensions(const CameraModel& cam, double agl_m)
{
    require_agl(agl_m);
    return {agl_m * cam.sensor_w_mm() / cam.focal_mm(), agl_m * cam.sensor_h_mm() / cam.focal_mm()};
}

double altitude_for_target(const CameraModel& cam, const TargetProfile& profile)
{
    validate(profile);
    return profile.target_size_m / profile.bbox_mean_px * (cam.focal_mm() * cam.image_w_px() / cam.sensor_w_mm());
}

double projected_target_px(const CameraModel& cam, double agl_m, double target_size_m)
{
    return target_size_m / ground_sampling_distance(cam, agl_m);
}

PxBand acceptable_px_band(const TargetProfile& profile)
{
    validate(profile);
    return {profile.bbox_mean_px - profile.bbox_std_px, profile.bbox_mean_px + profile.bbox_std_px};
}

double max_ground_speed(const CameraModel& cam, double gsd_m, double max_blur_px)
{
    if (!cam.shutter_s()) throw InvalidParameter("shutter_s", "camera has no shutter time; blur speed cap unavailable");
    require_positive("gsd_m", gsd_m);
    require_positive("max_blur_px", max_blur_px);
    return max_blur_px * gsd_m / *cam.shutter_s();
}

CameraModel camera_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw InvalidParameter("camera", "camera document must be a JSON object");
    std::optional<double> shutter;
    if (doc.contains("shutter_s") && !doc["shutter_s"].is_null()) shutter = number(doc, "shutter_s");
    return CameraModel(number(doc, "focal_mm"), number(doc, "sensor_w_mm"), number(doc, "sensor_h_mm"),
                       integer(doc, "image_w_px"), integer(doc, "image_h_px"), shutter);
}

nlohmann::json to_json(const CameraModel& cam)
{
    nlohmann::json doc = {{"focal_mm", cam.focal_mm()},     {"sensor_w_mm", cam.sensor_w_mm()},
                          {"sensor_h_mm", cam.sensor_h_mm()}, {"image_w_px", cam.image_w_px()},
                          {"image_h_px", cam.image_h_px()}};
    if (cam.shutter_s()) doc["shutter_s"] = *cam.shutter_s();
    return doc;
}

TargetProfile target_profile_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw InvalidParameter("target_profile", "target_profile must be a JSON object");
    TargetProfile p;
    if (doc.contains("target_size_m")) p.target_size_m = number(doc, "target_size_m");
    if (doc.contains("bbox_mean_px")) p.bbox_mean_px = number(doc, "bbox_mean_px");
    if (doc.contains("bbox_std_px")) p.bbox_std_px = number(doc, "bbox_std_px");
    validate(p);
    return p;
}

nlohmann::json to_json(const TargetProfile& profile)
{
    return {{"target_size_m", profile.target_size_m},
            {"bbox_mean_px", profile.bbox_mean_px},
            {"bbox_std_px", profile.bbox_std_px}};
}

} // namespace sarplan::camera
