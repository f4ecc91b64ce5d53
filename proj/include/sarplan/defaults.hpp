#pragma once

#include <json.hpp>

// Single source for every default. The table is echoed into each plan and
// report document so results can be reproduced.
namespace sarplan::defaults {

inline constexpr double kFrontOverlap = 0.60;
inline constexpr double kSideOverlap = 0.60;
inline constexpr double kMinOverlap = 0.5;
inline constexpr double kMaxOverlap = 0.9;
inline constexpr double kGsdTolerance = 0.10;
inline constexpr double kCanopyClearanceM = 10.0;
inline constexpr double kCruiseSpeedMps = 10.0;
inline constexpr double kTurnPenaltyS = 8.0;
inline constexpr double kTurnThresholdDeg = 45.0;
inline constexpr double kClimbRateMps = 2.5;
inline constexpr double kMaxSortieS = 1200.0;
inline constexpr double kMinAglM = 5.0;
inline constexpr int kMinPatchCells = 9;
inline constexpr int kHeadingStepDeg = 15;

// Person-detector training statistics (mean and std of the square bbox side).
inline constexpr double kBboxMeanPx = 64.0;
inline constexpr double kBboxStdPx = 23.0;
inline constexpr double kTargetSizeM = 0.7;

inline constexpr double kNadirToleranceDeg = 5.0;
inline constexpr double kSunMinElevationDeg = 40.0;
inline constexpr int kLabelSequenceDigits = 4;
inline constexpr double kCoverageCellM = 1.0;

inline nlohmann::json table()
{
    return {
        {"front_overlap", kFrontOverlap},
        {"side_overlap", kSideOverlap},
        {"overlap_range", {kMinOverlap, kMaxOverlap}},
        {"gsd_tolerance", kGsdTolerance},
        {"canopy_clearance_m", kCanopyClearanceM},
        {"cruise_speed_mps", kCruiseSpeedMps},
        {"turn_penalty_s", kTurnPenaltyS},
        {"turn_threshold_deg", kTurnThresholdDeg},
        {"climb_rate_mps", kClimbRateMps},
        {"max_sortie_s", kMaxSortieS},
        {"min_agl_m", kMinAglM},
        {"min_patch_cells", kMinPatchCells},
        {"bbox_mean_px", kBboxMeanPx},
        {"bbox_std_px", kBboxStdPx},
        {"target_size_m", kTargetSizeM},
        {"nadir_tolerance_deg", kNadirToleranceDeg},
        {"sun_min_elevation_deg", kSunMinElevationDeg},
        {"label_sequence_digits", kLabelSequenceDigits},
        {"coverage_cell_m", kCoverageCellM},
    };
}

} // namespace sarplan::defaults
