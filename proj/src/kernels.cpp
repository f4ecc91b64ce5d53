#include "sarplan/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace sarplan::kernels {

namespace {

constexpr double kContainEps = 1e-9;
constexpr int kRowBlock = 16;
// Below this many cells the OpenMP region costs more than it saves.
constexpr std::size_t kParallelMinCells = 1 << 14;

struct CellWindow {
    int r0, r1, c0, c1; // half-open
};

CellWindow cells_touching(const Grid& grid, const OrientedRect& rect)
{
    const double h = rect.heading_deg * geo::kDegToRad;
    const double ext_e = std::abs(rect.half_w * std::cos(h)) + std::abs(rect.half_h * std::sin(h));
    const double ext_n = std::abs(rect.half_w * std::sin(h)) + std::abs(rect.half_h * std::cos(h));
    auto span = [](double lo, double hi, double first, double step, int count) {
        double a = (lo - first) / step;
        double b = (hi - first) / step;
        if (a > b) std::swap(a, b);
        int i0 = static_cast<int>(std::floor(a)) - 1;
        int i1 = static_cast<int>(std::ceil(b)) + 2;
        return std::pair{std::clamp(i0, 0, count), std::clamp(i1, 0, count)};
    };
    auto [c0, c1] = span(rect.center.east_m - ext_e, rect.center.east_m + ext_e, grid.first.east_m, grid.step_e, grid.cols);
    auto [r0, r1] = span(rect.center.north_m - ext_n, rect.center.north_m + ext_n, grid.first.north_m, grid.step_n, grid.rows);
    return {r0, r1, c0, c1};
}

void stamp_rows(const Grid& grid, const OrientedRect& rect, const CellWindow& win, int row_lo, int row_hi,
                std::vector<std::uint16_t>& depth)
{
    const int r0 = std::max(win.r0, row_lo);
    const int r1 = std::min(win.r1, row_hi);
    for (int r = r0; r < r1; ++r)
        for (int c = win.c0; c < win.c1; ++c)
            if (contains(rect, grid.center(r, c))) ++depth[static_cast<std::size_t>(r) * grid.cols + c];
}

// Cells this close to an edge, or rows this close to a vertex, take the
// exact per-point test.
constexpr double kScanMargin = 1e-6;

struct Crossing {
    double x;
    double reach; // half-width of the near-edge band on this row
};

// One mask row by scanline parity. Crossing abscissae use the same formula
// and edge order as geo::point_in_polygon so the parity is bit-identical.
void mask_row(const geo::LocalPolygon& poly, const Grid& grid, int r, std::vector<Crossing>& xs,
              std::vector<std::uint8_t>& exact, std::uint8_t* out)
{
    const double y = grid.center(r, 0).north_m;
    auto near_vertex = [&](const geo::LocalRing& ring) {
        return std::any_of(ring.begin(), ring.end(), [&](const geo::LocalPoint& v) { return std::abs(v.north_m - y) <= kScanMargin; });
    };
    bool slow = grid.step_e <= 0.0 || near_vertex(poly.exterior);
    for (const auto& hole : poly.holes) slow = slow || near_vertex(hole);
    if (slow) {
        for (int c = 0; c < grid.cols; ++c) out[c] = geo::point_in_polygon(poly, grid.center(r, c)) ? 1 : 0;
        return;
    }
    xs.clear();
    auto collect = [&](const geo::LocalRing& ring) {
        for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
            const auto& a = ring[i];
            const auto& b = ring[j];
            if ((a.north_m > y) != (b.north_m > y)) {
                const double dn = b.north_m - a.north_m, de = b.east_m - a.east_m;
                const double x = a.east_m + (y - a.north_m) * de / dn;
                xs.push_back({x, kScanMargin * std::hypot(de, dn) / std::abs(dn)});
            }
        }
    };
    collect(poly.exterior);
    for (const auto& hole : poly.holes) collect(hole);
    std::sort(xs.begin(), xs.end(), [](const Crossing& p, const Crossing& q) { return p.x < q.x; });

    exact.assign(static_cast<std::size_t>(grid.cols), 0);
    for (const auto& x : xs) {
        const double lo = (x.x - x.reach - grid.first.east_m) / grid.step_e;
        const double hi = (x.x + x.reach - grid.first.east_m) / grid.step_e;
        const int c0 = std::clamp(static_cast<int>(std::floor(lo)) - 1, 0, grid.cols);
        const int c1 = std::clamp(static_cast<int>(std::ceil(hi)) + 2, 0, grid.cols);
        std::fill(exact.begin() + c0, exact.begin() + c1, std::uint8_t{1});
    }
    std::size_t passed = 0; // crossings with x <= cell east
    for (int c = 0; c < grid.cols; ++c) {
        const auto p = grid.center(r, c);
        while (passed < xs.size() && xs[passed].x <= p.east_m) ++passed;
        if (exact[static_cast<std::size_t>(c)])
            out[c] = geo::point_in_polygon(poly, p) ? 1 : 0;
        else
            out[c] = (xs.size() - passed) % 2 == 1 ? 1 : 0;
    }
}

ElevRange merge(ElevRange a, const ElevRange& b)
{
    if (b.count == 0) return a;
    if (a.count == 0) return b;
    a.min = std::min(a.min, b.min);
    a.max = std::max(a.max, b.max);
    a.count += b.count;
    return a;
}

} // namespace

bool contains(const OrientedRect& rect, geo::LocalPoint p)
{
    const double h = rect.heading_deg * geo::kDegToRad;
    const double de = p.east_m - rect.center.east_m;
    const double dn = p.north_m - rect.center.north_m;
    // Image x axis points to (cos h, -sin h); image up axis to (sin h, cos h).
    const double u = de * std::cos(h) - dn * std::sin(h);
    const double v = de * std::sin(h) + dn * std::cos(h);
    return std::abs(u) <= rect.half_w + kContainEps && std::abs(v) <= rect.half_h + kContainEps;
}

namespace serial {

std::vector<std::uint8_t> polygon_mask(const geo::LocalPolygon& poly, const Grid& grid)
{
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c)
            mask[static_cast<std::size_t>(r) * grid.cols + c] = geo::point_in_polygon(poly, grid.center(r, c)) ? 1 : 0;
    return mask;
}

std::vector<std::uint16_t> stamp_depth(const Grid& grid, std::span<const OrientedRect> rects)
{
    std::vector<std::uint16_t> depth(grid.size(), 0);
    for (const auto& rect : rects) stamp_rows(grid, rect, cells_touching(grid, rect), 0, grid.rows, depth);
    return depth;
}

ElevRange window_range(std::span<const double> values, std::span<const std::uint8_t> valid, int stride, int r0,
                       int r1, int c0, int c1)
{
    ElevRange out;
    for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
            const auto i = static_cast<std::size_t>(r) * stride + c;
            if (!valid[i]) continue;
            out = merge(out, ElevRange{values[i], values[i], 1});
        }
    }
    return out;
}

} // namespace serial

namespace parallel {

std::vector<std::uint8_t> polygon_mask(const geo::LocalPolygon& poly, const Grid& grid)
{
    std::vector<std::uint8_t> mask(grid.size(), 0);
    const bool go_parallel = grid.size() >= kParallelMinCells;
#pragma omp parallel if (go_parallel)
    {
        std::vector<Crossing> xs;
        std::vector<std::uint8_t> exact;
#pragma omp for schedule(static)
        for (int r = 0; r < grid.rows; ++r)
            mask_row(poly, grid, r, xs, exact, mask.data() + static_cast<std::size_t>(r) * grid.cols);
    }
    return mask;
}

std::vector<std::uint16_t> stamp_depth(const Grid& grid, std::span<const OrientedRect> rects)
{
    std::vector<std::uint16_t> depth(grid.size(), 0);
    // Bucket rectangles by row block so every block is written by one thread.
    const int blocks = (grid.rows + kRowBlock - 1) / kRowBlock;
    std::vector<CellWindow> windows(rects.size());
    std::vector<std::vector<std::size_t>> bucket(static_cast<std::size_t>(blocks));
    for (std::size_t i = 0; i < rects.size(); ++i) {
        windows[i] = cells_touching(grid, rects[i]);
        if (windows[i].r0 >= windows[i].r1 || windows[i].c0 >= windows[i].c1) continue;
        for (int b = windows[i].r0 / kRowBlock; b <= (windows[i].r1 - 1) / kRowBlock; ++b)
            bucket[static_cast<std::size_t>(b)].push_back(i);
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (int b = 0; b < blocks; ++b) {
        const int lo = b * kRowBlock;
        const int hi = std::min(grid.rows, lo + kRowBlock);
        for (std::size_t i : bucket[static_cast<std::size_t>(b)]) stamp_rows(grid, rects[i], windows[i], lo, hi, depth);
    }
    return depth;
}

ElevRange window_range(std::span<const double> values, std::span<const std::uint8_t> valid, int stride, int r0,
                       int r1, int c0, int c1)
{
    const std::size_t cells = static_cast<std::size_t>(std::max(0, r1 - r0)) * static_cast<std::size_t>(std::max(0, c1 - c0));
    if (cells < kParallelMinCells) return serial::window_range(values, valid, stride, r0, r1, c0, c1);
    constexpr double inf = std::numeric_limits<double>::infinity();
    double lo = inf, hi = -inf;
    std::size_t count = 0;
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi) reduction(+ : count)
    for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
            const auto i = static_cast<std::size_t>(r) * stride + c;
            if (!valid[i]) continue;
            lo = std::min(lo, values[i]);
            hi = std::max(hi, values[i]);
            ++count;
        }
    }
    if (count == 0) return {};
    return {lo, hi, count};
}

} // namespace parallel

} // namespace sarplan::kernels
