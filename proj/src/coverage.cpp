#include <cmath>

#include "sarplan/audit.hpp"
#include "sarplan/error.hpp"
#include "sarplan/georef.hpp"
#include "sarplan/kernels.hpp"

namespace sarplan::audit {

namespace {

constexpr double kMaxCells = 2.0e8;

} // namespace

CoverageStats coverage_analysis(const std::vector<ManifestRecord>& records, const geo::GeoPolygon& aoi,
                                const camera::CameraModel& cam, double cell_size_m, double nadir_tolerance_deg)
{
    if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m))
        throw InvalidParameter("coverage_cell_m", "coverage cell size must be positive");
    const geo::LocalFrame frame(aoi.bbox_center());
    const auto local = geo::project(frame, aoi);
    const auto box = geo::bounding_box(local);
    const double cols_d = std::ceil((box.max_e - box.min_e) / cell_size_m);
    const double rows_d = std::ceil((box.max_n - box.min_n) / cell_size_m);
    if (cols_d * rows_d > kMaxCells)
        throw InvalidParameter("coverage_cell_m", "coverage grid too large; use a larger cell size");

    kernels::Grid grid;
    grid.first = {box.min_e + 0.5 * cell_size_m, box.min_n + 0.5 * cell_size_m};
    grid.step_e = grid.step_n = cell_size_m;
    grid.cols = std::max(1, static_cast<int>(cols_d));
    grid.rows = std::max(1, static_cast<int>(rows_d));
    const auto mask = kernels::polygon_mask(local, grid);

    CoverageStats stats;
    stats.cell_size_m = cell_size_m;
    for (auto m : mask) stats.aoi_cells += m ? 1 : 0;
    if (stats.aoi_cells == 0) throw InvalidParameter("aoi", "AOI contains no coverage cell at this cell size");

    std::vector<kernels::OrientedRect> rects;
    for (const auto& r : records) {
        if (!r.lat || !r.lon || !r.agl_m || !r.heading_deg || !r.gimbal_pitch_deg
            || !georef::is_nadir(*r.gimbal_pitch_deg, nadir_tolerance_deg)) {
            ++stats.excluded_images;
            continue;
        }
        georef::ImageMeta meta;
        meta.image_id = r.image_id;
        meta.center = {*r.lat, *r.lon};
        meta.agl_m = *r.agl_m;
        meta.heading_deg = *r.heading_deg;
        meta.gimbal_pitch_deg = *r.gimbal_pitch_deg;
        try {
            rects.push_back(georef::footprint_rect(frame, meta, cam));
        } catch (const RangeError&) {
            ++stats.excluded_images; // too far from the AOI to project
        }
    }
    stats.stamped_images = rects.size();

    const auto depth = kernels::stamp_depth(grid, rects);
    std::size_t ge1 = 0, ge2 = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        ge1 += depth[i] >= 1;
        ge2 += depth[i] >= 2;
    }
    stats.fraction_ge1 = static_cast<double>(ge1) / static_cast<double>(stats.aoi_cells);
    stats.fraction_ge2 = static_cast<double>(ge2) / static_cast<double>(stats.aoi_cells);
    stats.gap_cells = stats.aoi_cells - ge1;
    return stats;
}

} // namespace sarplan::audit
