#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sarplan/geo.hpp"

// Data-parallel inner loops. Each kernel has an OpenMP implementation used by
// the library and a serial reference kept for tests and benchmarks; both
// must produce identical output.
namespace sarplan::kernels {

// Regular grid of cell centers: center(r, c) = first + (c * step_e, r * step_n).
// step_n is negative for north-up rasters.
struct Grid {
    geo::LocalPoint first;
    double step_e = 1.0;
    double step_n = 1.0;
    int rows = 0;
    int cols = 0;

    geo::LocalPoint center(int r, int c) const
    {
        return {first.east_m + c * step_e, first.north_m + r * step_n};
    }
    std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};

// Nadir image footprint on flat ground. Heading is clockwise from north and
// gives the direction the image top faces; half_w is along the image x axis.
struct OrientedRect {
    geo::LocalPoint center;
    double half_w = 0.0;
    double half_h = 0.0;
    double heading_deg = 0.0;
};

struct ElevRange {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

namespace serial {
std::vector<std::uint8_t> polygon_mask(const geo::LocalPolygon& poly, const Grid& grid);
std::vector<std::uint16_t> stamp_depth(const Grid& grid, std::span<const OrientedRect> rects);
// Range over cells with valid[i] != 0 inside rows [r0,r1) x cols [c0,c1) of
// a row-major array with `stride` columns.
ElevRange window_range(std::span<const double> values, std::span<const std::uint8_t> valid, int stride, int r0,
                       int r1, int c0, int c1);
} // namespace serial

namespace parallel {
std::vector<std::uint8_t> polygon_mask(const geo::LocalPolygon& poly, const Grid& grid);
std::vector<std::uint16_t> stamp_depth(const Grid& grid, std::span<const OrientedRect> rects);
ElevRange window_range(std::span<const double> values, std::span<const std::uint8_t> valid, int stride, int r0,
                       int r1, int c0, int c1);
} // namespace parallel

using parallel::polygon_mask;
using parallel::stamp_depth;
using parallel::window_range;

bool contains(const OrientedRect& rect, geo::LocalPoint p);

} // namespace sarplan::kernels
