#pragma once

#include <optional>

#include <json.hpp>

namespace sarplan::camera {

// Pinhole nadir camera. Construction validates every dimension; a pixel
// aspect off by more than 2% sets the squareness warning instead of failing.
class CameraModel {
public:
    CameraModel(double focal_mm, double sensor_w_mm, double sensor_h_mm, int image_w_px, int image_h_px,
                std::optional<double> shutter_s = std::nullopt);

    double focal_mm() const noexcept { return focal_mm_; }
    double sensor_w_mm() const noexcept { return sensor_w_mm_; }
    double sensor_h_mm() const noexcept { return sensor_h_mm_; }
    int image_w_px() const noexcept { return image_w_px_; }
    int image_h_px() const noexcept { return image_h_px_; }
    const std::optional<double>& shutter_s() const noexcept { return shutter_s_; }
    bool non_square_pixels() const noexcept { return non_square_; }

private:
    double focal_mm_;
    double sensor_w_mm_;
    double sensor_h_mm_;
    int image_w_px_;
    int image_h_px_;
    std::optional<double> shutter_s_;
    bool non_square_;
};

// CV/ML model target statistics: physical target extent and the mean/std of
// the training bounding boxes in pixels.
struct TargetProfile {
    double target_size_m = 0.7;
    double bbox_mean_px = 64.0;
    double bbox_std_px = 23.0;
};

// Throws InvalidParameter unless all fields are positive and std < mean.
void validate(const TargetProfile& profile);

struct Footprint {
    double width_m = 0.0;  // along the image x axis
    double height_m = 0.0; // along the image y axis
};

struct PxBand {
    double min_px = 0.0;
    double max_px = 0.0;
};

double ground_sampling_distance(const CameraModel& cam, double agl_m);
// GSD from the sensor height instead of the width; used to check squareness.
double ground_sampling_distance_vertical(const CameraModel& cam, double agl_m);
Footprint footprint_dimensions(const CameraModel& cam, double agl_m);
// AGL at which the target projects to exactly bbox_mean_px.
double altitude_for_target(const CameraModel& cam, const TargetProfile& profile);
double projected_target_px(const CameraModel& cam, double agl_m, double target_size_m);
PxBand acceptable_px_band(const TargetProfile& profile);
double max_ground_speed(const CameraModel& cam, double gsd_m, double max_blur_px);

// Camera document: {focal_mm, sensor_w_mm, sensor_h_mm, image_w_px, image_h_px, shutter_s?}.
CameraModel camera_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const CameraModel& cam);
TargetProfile target_profile_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const TargetProfile& profile);

} // namespace sarplan::camera
