#include "sarplan/terrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "sarplan/error.hpp"
#include "sarplan/geojson.hpp"
#include "sarplan/kernels.hpp"
#include "sarplan/text.hpp"

namespace sarplan::terrain {

DemRaster::DemRaster(int ncols, int nrows, double xllcorner, double yllcorner, double cellsize, double nodata,
                     std::vector<double> values)
    : ncols_(ncols), nrows_(nrows), xll_(xllcorner), yll_(yllcorner), cellsize_(cellsize), nodata_(nodata)
    , values_(std::move(values))
{
    if (ncols_ < 2 || nrows_ < 2) throw InvalidParameter("dem", "DEM needs at least 2 rows and 2 columns");
    if (!(cellsize_ > 0.0) || !std::isfinite(cellsize_)) throw InvalidParameter("dem", "cellsize must be positive");
    if (values_.size() != static_cast<std::size_t>(ncols_) * static_cast<std::size_t>(nrows_))
        throw InvalidParameter("dem", "value count does not match ncols * nrows");
    for (double v : values_)
        if (v != nodata_ && !std::isfinite(v)) throw InvalidParameter("dem", "non-finite elevation");
}

geo::GeoPoint DemRaster::cell_center(int row, int col) const
{
    return {yll_ + (nrows_ - row - 0.5) * cellsize_, xll_ + (col + 0.5) * cellsize_};
}

DemRaster parse_asc_dem(std::string_view text)
{
    static constexpr std::array<std::string_view, 6> kKeys = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize",
                                                              "nodata_value"};
    std::map<std::string, double> header;
    std::vector<double> values;
    long long ncols = -1, nrows = -1;
    std::size_t data_rows = 0;
    std::size_t last_line = 0;
    bool in_data = false;

    const auto lines = text::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto tokens = text::split_ws(lines[i]);
        if (tokens.empty()) continue;
        last_line = lineno;
        const bool numeric_start = text::parse_double(tokens[0]).has_value();
        if (!in_data && !numeric_start) {
            const auto key = text::to_lower(tokens[0]);
            if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
                throw ParseError(lineno, "unknown header key '" + std::string(tokens[0]) + "'");
            if (tokens.size() != 2) throw ParseError(lineno, "header key '" + key + "' needs exactly one value");
            const auto v = text::parse_double(tokens[1]);
            if (!v) throw ParseError(lineno, "non-numeric value '" + std::string(tokens[1]) + "' for " + key);
            if (header.count(key)) throw ParseError(lineno, "duplicate header key '" + key + "'");
            header[key] = *v;
            continue;
        }
        if (!in_data) {
            for (auto key : kKeys)
                if (!header.count(std::string(key)))
                    throw ParseError(lineno, "missing header key '" + std::string(key) + "'");
            const auto nc = text::parse_int(text::format_double(header["ncols"]));
            const auto nr = text::parse_int(text::format_double(header["nrows"]));
            if (!nc || !nr || *nc < 2 || *nr < 2) throw ParseError(lineno, "ncols and nrows must be integers >= 2");
            ncols = *nc;
            nrows = *nr;
            values.reserve(static_cast<std::size_t>(ncols * nrows));
            in_data = true;
        }
        if (static_cast<long long>(tokens.size()) != ncols)
            throw ParseError(lineno, "expected " + std::to_string(ncols) + " values on data line, found "
                                         + std::to_string(tokens.size()));
        if (static_cast<long long>(data_rows) == nrows)
            throw ParseError(lineno, "more than " + std::to_string(nrows) + " data rows");
        for (auto tok : tokens) {
            const auto v = text::parse_double(tok);
            if (!v) throw ParseError(lineno, "non-numeric token '" + std::string(tok) + "'");
            values.push_back(*v);
        }
        ++data_rows;
    }
    if (!in_data) {
        for (auto key : kKeys)
            if (!header.count(std::string(key))) throw ParseError(last_line, "missing header key '" + std::string(key) + "'");
        throw ParseError(last_line, "no data rows");
    }
    if (static_cast<long long>(data_rows) != nrows)
        throw ParseError(last_line, "expected " + std::to_string(nrows) + " data rows, found " + std::to_string(data_rows));
    try {
        return DemRaster(static_cast<int>(ncols), static_cast<int>(nrows), header["xllcorner"], header["yllcorner"],
                         header["cellsize"], header["nodata_value"], std::move(values));
    } catch (const InvalidParameter& e) {
        throw ParseError(0, e.what());
    }
}

std::string serialize_asc_dem(const DemRaster& dem)
{
    std::string out;
    out += "ncols " + std::to_string(dem.ncols()) + "\n";
    out += "nrows " + std::to_string(dem.nrows()) + "\n";
    out += "xllcorner " + text::format_double(dem.xllcorner()) + "\n";
    out += "yllcorner " + text::format_double(dem.yllcorner()) + "\n";
    out += "cellsize " + text::format_double(dem.cellsize()) + "\n";
    out += "NODATA_value " + text::format_double(dem.nodata()) + "\n";
    for (int r = 0; r < dem.nrows(); ++r) {
        for (int c = 0; c < dem.ncols(); ++c) {
            if (c) out += ' ';
            out += text::format_double(dem.at(r, c));
        }
        out += '\n';
    }
    return out;
}

double elevation_at(const DemRaster& dem, geo::GeoPoint p)
{
    const double east_edge = dem.xllcorner() + dem.ncols() * dem.cellsize();
    const double north_edge = dem.yllcorner() + dem.nrows() * dem.cellsize();
    if (p.lon_deg < dem.xllcorner() || p.lon_deg > east_edge || p.lat_deg < dem.yllcorner() || p.lat_deg > north_edge)
        throw RangeError("query point outside DEM extent");

    constexpr double kSnap = 1e-9;
    auto axis = [&](double frac, int count) {
        frac = std::clamp(frac, 0.0, static_cast<double>(count - 1));
        int i0 = std::min(static_cast<int>(std::floor(frac)), count - 2);
        double t = frac - i0;
        if (t < kSnap) t = 0.0;
        if (t > 1.0 - kSnap) t = 1.0;
        return std::pair{i0, t};
    };
    const auto [c0, tx] = axis((p.lon_deg - dem.xllcorner()) / dem.cellsize() - 0.5, dem.ncols());
    const auto [r0, ty] = axis((north_edge - p.lat_deg) / dem.cellsize() - 0.5, dem.nrows());

    double sum = 0.0;
    const std::array<std::tuple<int, int, double>, 4> taps = {{{r0, c0, (1 - tx) * (1 - ty)},
                                                               {r0, c0 + 1, tx * (1 - ty)},
                                                               {r0 + 1, c0, (1 - tx) * ty},
                                                               {r0 + 1, c0 + 1, tx * ty}}};
    for (const auto& [r, c, w] : taps) {
        if (w == 0.0) continue;
        if (dem.is_nodata(r, c)) throw RangeError("nodata cell in the interpolation neighbourhood");
        sum += w * dem.at(r, c);
    }
    return sum;
}

double max_elev_range_for_gsd_tolerance(double agl_nominal_m, double gsd_tolerance_fraction)
{
    if (!(agl_nominal_m > 0.0)) throw InvalidParameter("agl_m", "nominal AGL must be positive");
    if (!(gsd_tolerance_fraction > 0.0 && gsd_tolerance_fraction <= 0.5))
        throw InvalidParameter("gsd_tolerance", "GSD tolerance must lie in (0, 0.5]");
    return gsd_tolerance_fraction * agl_nominal_m;
}

namespace {

struct Window {
    int r0 = 0, c0 = 0, rows = 0, cols = 0;
    std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols + c; }
};

// Cell window of the DEM touched by the AOI bounding box, plus AOI membership.
struct AoiMask {
    Window win;
    std::vector<std::uint8_t> inside;
};

AoiMask rasterize_aoi(const DemRaster& dem, const geo::GeoPolygon& aoi)
{
    double min_lat = 90, max_lat = -90, min_lon = 180, max_lon = -180;
    for (const auto& p : aoi.exterior()) {
        min_lat = std::min(min_lat, p.lat_deg);
        max_lat = std::max(max_lat, p.lat_deg);
        min_lon = std::min(min_lon, p.lon_deg);
        max_lon = std::max(max_lon, p.lon_deg);
    }
    const double cs = dem.cellsize();
    const int c0 = std::max(0, static_cast<int>(std::floor((min_lon - dem.xllcorner()) / cs)));
    const int c1 = std::min(dem.ncols(), static_cast<int>(std::ceil((max_lon - dem.xllcorner()) / cs)) + 1);
    const double north_edge = dem.yllcorner() + dem.nrows() * cs;
    const int r0 = std::max(0, static_cast<int>(std::floor((north_edge - max_lat) / cs)));
    const int r1 = std::min(dem.nrows(), static_cast<int>(std::ceil((north_edge - min_lat) / cs)) + 1);
    if (c0 >= c1 || r0 >= r1) throw RangeError("AOI does not intersect the DEM extent");

    const geo::LocalFrame frame(aoi.bbox_center());
    const auto poly = geo::project(frame, aoi);
    // Centers are affine in (row, col); only the first needs projecting.
    const auto first = dem.cell_center(r0, c0);
    kernels::Grid grid;
    grid.first = {(first.lon_deg - frame.origin().lon_deg) * frame.meters_per_deg_lon(),
                  (first.lat_deg - frame.origin().lat_deg) * frame.meters_per_deg_lat()};
    grid.step_e = cs * frame.meters_per_deg_lon();
    grid.step_n = -cs * frame.meters_per_deg_lat();
    grid.rows = r1 - r0;
    grid.cols = c1 - c0;
    return {{r0, c0, grid.rows, grid.cols}, kernels::polygon_mask(poly, grid)};
}

struct Region {
    std::vector<int> cells; // window indices
    double min = 0.0, max = 0.0;
    Cell origin;
    bool keep = true;
};

class Decomposer {
public:
    Decomposer(const DemRaster& dem, const AoiMask& mask, double max_range)
        : dem_(dem), win_(mask.win), inside_(mask.inside), max_range_(max_range)
    {
        values_.resize(inside_.size());
        valid_.resize(inside_.size());
        for (int r = 0; r < win_.rows; ++r) {
            for (int c = 0; c < win_.cols; ++c) {
                const auto i = win_.index(r, c);
                values_[i] = dem.at(win_.r0 + r, win_.c0 + c);
                valid_[i] = inside_[i] && !dem.is_nodata(win_.r0 + r, win_.c0 + c);
            }
        }
        label_.assign(inside_.size(), -1);
    }

    std::vector<Region> run()
    {
        split(0, win_.rows, 0, win_.cols);
        return merge();
    }

    const std::vector<int>& labels() const { return label_; }
    const std::vector<std::uint8_t>& valid() const { return valid_; }

private:
    // Quadtree seeding: blocks are split until level. Merging from level
    // seeds gives the same result as merging from single cells, faster.
    void split(int r0, int r1, int c0, int c1)
    {
        const auto range = kernels::window_range(values_, valid_, win_.cols, r0, r1, c0, c1);
        if (range.count == 0) return;
        const int rows = r1 - r0, cols = c1 - c0;
        if (range.max == range.min || (rows == 1 && cols == 1)) {
            emit_leaf(r0, r1, c0, c1);
            return;
        }
        const int rm = rows > 1 ? r0 + rows / 2 : r1;
        const int cm = cols > 1 ? c0 + cols / 2 : c1;
        split(r0, rm, c0, cm);
        if (cm < c1) split(r0, rm, cm, c1);
        if (rm < r1) {
            split(rm, r1, c0, cm);
            if (cm < c1) split(rm, r1, cm, c1);
        }
    }

    // A leaf window may hold several disconnected pieces of a concave AOI.
    void emit_leaf(int r0, int r1, int c0, int c1)
    {
        for (int r = r0; r < r1; ++r) {
            for (int c = c0; c < c1; ++c) {
                const auto seed = win_.index(r, c);
                if (!valid_[seed] || label_[seed] >= 0) continue;
                Region region;
                const int id = static_cast<int>(leaves_.size());
                std::vector<int> stack{static_cast<int>(seed)};
                label_[seed] = id;
                region.min = region.max = values_[seed];
                region.origin = {r, c};
                while (!stack.empty()) {
                    const int cur = stack.back();
                    stack.pop_back();
                    region.cells.push_back(cur);
                    const int cr = cur / win_.cols, cc = cur % win_.cols;
                    region.min = std::min(region.min, values_[cur]);
                    region.max = std::max(region.max, values_[cur]);
                    const std::array<std::pair<int, int>, 4> nbrs = {{{cr - 1, cc}, {cr + 1, cc}, {cr, cc - 1}, {cr, cc + 1}}};
                    for (auto [nr, nc] : nbrs) {
                        if (nr < r0 || nr >= r1 || nc < c0 || nc >= c1) continue;
                        const auto ni = win_.index(nr, nc);
                        if (!valid_[ni] || label_[ni] >= 0) continue;
                        label_[ni] = id;
                        stack.push_back(static_cast<int>(ni));
                    }
                }
                leaves_.push_back(std::move(region));
            }
        }
    }

    // Agglomerative merging: always join the adjacent pair whose union has
    // the smallest elevation range, stopping once that exceeds the bound.
    // The merge order does not depend on the bound, so a larger bound only
    // extends the same sequence and never yields more regions.
    std::vector<Region> merge()
    {
        const int n = static_cast<int>(leaves_.size());
        struct Edge {
            double cost;
            std::size_t id;
            int a, b;
            bool operator>(const Edge& o) const { return cost != o.cost ? cost > o.cost : id > o.id; }
        };
        std::vector<std::pair<int, int>> links;
        for (int r = 0; r < win_.rows; ++r) {
            for (int c = 0; c < win_.cols; ++c) {
                const int a = label_[win_.index(r, c)];
                if (a < 0) continue;
                if (c + 1 < win_.cols) {
                    const int b = label_[win_.index(r, c + 1)];
                    if (b >= 0 && b != a) links.push_back(std::minmax(a, b));
                }
                if (r + 1 < win_.rows) {
                    const int b = label_[win_.index(r + 1, c)];
                    if (b >= 0 && b != a) links.push_back(std::minmax(a, b));
                }
            }
        }
        std::sort(links.begin(), links.end());
        links.erase(std::unique(links.begin(), links.end()), links.end());

        std::vector<int> parent(static_cast<std::size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
        std::vector<std::size_t> size(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) lo[i] = leaves_[i].min, hi[i] = leaves_[i].max, size[i] = leaves_[i].cells.size();
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto cost = [&](int a, int b) { return std::max(hi[a], hi[b]) - std::min(lo[a], lo[b]); };

        std::priority_queue<Edge, std::vector<Edge>, std::greater<>> heap;
        for (std::size_t e = 0; e < links.size(); ++e)
            heap.push({cost(links[e].first, links[e].second), e, links[e].first, links[e].second});
        while (!heap.empty()) {
            const Edge top = heap.top();
            heap.pop();
            int a = find(top.a), b = find(top.b);
            if (a == b) continue;
            // Stored costs go stale as regions grow; they only ever rise.
            const double now = cost(a, b);
            if (now > top.cost) {
                heap.push({now, top.id, a, b});
                continue;
            }
            if (now > max_range_) break;
            if (size[a] < size[b] || (size[a] == size[b] && b < a)) std::swap(a, b);
            parent[b] = a;
            size[a] += size[b];
            lo[a] = std::min(lo[a], lo[b]);
            hi[a] = std::max(hi[a], hi[b]);
        }

        std::vector<int> slot(static_cast<std::size_t>(n), -1);
        std::vector<Region> merged;
        for (int i = 0; i < n; ++i) {
            const int root = find(i);
            if (slot[root] < 0) {
                slot[root] = static_cast<int>(merged.size());
                Region region;
                region.min = lo[root];
                region.max = hi[root];
                region.origin = leaves_[i].origin;
                merged.push_back(std::move(region));
            }
            auto& region = merged[slot[root]];
            region.origin = std::min(region.origin, leaves_[i].origin);
            region.cells.insert(region.cells.end(), leaves_[i].cells.begin(), leaves_[i].cells.end());
        }
        return merged;
    }

    const DemRaster& dem_;
    Window win_;
    const std::vector<std::uint8_t>& inside_;
    double max_range_;
    std::vector<double> values_;
    std::vector<std::uint8_t> valid_;
    std::vector<int> label_;
    std::vector<Region> leaves_;
};

} // namespace

std::vector<Cell> aoi_cells(const DemRaster& dem, const geo::GeoPolygon& aoi)
{
    const auto mask = rasterize_aoi(dem, aoi);
    std::vector<Cell> cells;
    for (int r = 0; r < mask.win.rows; ++r)
        for (int c = 0; c < mask.win.cols; ++c)
            if (mask.inside[mask.win.index(r, c)]) cells.push_back({mask.win.r0 + r, mask.win.c0 + c});
    return cells;
}

Decomposition decompose_stairstep(const DemRaster& dem, const geo::GeoPolygon& aoi, double max_range_m,
                                  const DecomposeOptions& options)
{
    if (!(max_range_m > 0.0)) throw InvalidParameter("max_range_m", "elevation range bound must be positive");
    const auto mask = rasterize_aoi(dem, aoi);
    const auto& win = mask.win;

    Decomposition out;
    for (int r = 0; r < win.rows; ++r)
        for (int c = 0; c < win.cols; ++c)
            if (mask.inside[win.index(r, c)]) out.aoi_cells.push_back({win.r0 + r, win.c0 + c});
    if (out.aoi_cells.empty()) throw RangeError("AOI contains no DEM cell centers");

    Decomposer decomposer(dem, mask, max_range_m);
    auto regions = decomposer.run();

    // Cliff rule: undersized patches hemmed in by other patches cannot be
    // flown at a common AGL.
    std::vector<int> owner(mask.inside.size(), -1);
    for (std::size_t p = 0; p < regions.size(); ++p)
        for (int i : regions[p].cells) owner[static_cast<std::size_t>(i)] = static_cast<int>(p);
    std::vector<char> keep(regions.size(), 1);
    for (std::size_t p = 0; p < regions.size(); ++p) {
        if (regions[p].cells.size() >= options.min_patch_cells) continue;
        bool boxed_in = false;
        for (int i : regions[p].cells) {
            const int r = i / win.cols, c = i % win.cols;
            const std::array<std::pair<int, int>, 4> nbrs = {{{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}}};
            for (auto [nr, nc] : nbrs) {
                if (nr < 0 || nr >= win.rows || nc < 0 || nc >= win.cols) continue;
                const int o = owner[win.index(nr, nc)];
                if (o >= 0 && o != static_cast<int>(p)) boxed_in = true;
            }
        }
        if (boxed_in) {
            keep[p] = 0;
            ++out.cliff_regions;
        }
    }

    for (std::size_t p = 0; p < regions.size(); ++p) regions[p].keep = keep[p];
    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) { return a.origin < b.origin; });

    for (auto& region : regions) {
        std::vector<Cell> cells;
        cells.reserve(region.cells.size());
        for (int i : region.cells) cells.push_back({win.r0 + i / win.cols, win.c0 + i % win.cols});
        std::sort(cells.begin(), cells.end());
        if (!region.keep) {
            out.unplannable.insert(out.unplannable.end(), cells.begin(), cells.end());
            continue;
        }
        TerrainPatch patch;
        patch.id = static_cast<int>(out.patches.size());
        patch.cells = std::move(cells);
        patch.elev_min_m = region.min;
        patch.elev_max_m = region.max;
        out.patches.push_back(std::move(patch));
    }
    for (int r = 0; r < win.rows; ++r)
        for (int c = 0; c < win.cols; ++c) {
            const auto i = win.index(r, c);
            if (mask.inside[i] && !decomposer.valid()[i]) out.unplannable.push_back({win.r0 + r, win.c0 + c});
        }
    std::sort(out.unplannable.begin(), out.unplannable.end());
    return out;
}

PatchOutline patch_outline(const DemRaster& dem, const TerrainPatch& patch)
{
    // Corners are indexed (row, col) with rows growing southward. Edges run
    // counterclockwise in (lon, lat) so the patch interior lies on the left.
    using Corner = std::pair<int, int>;
    std::set<Cell> members(patch.cells.begin(), patch.cells.end());
    auto in = [&](int r, int c) { return members.count({r, c}) > 0; };
    std::multimap<Corner, Corner> edges;
    for (const auto& cell : patch.cells) {
        const int r = cell.row, c = cell.col;
        if (!in(r + 1, c)) edges.insert({{r + 1, c}, {r + 1, c + 1}});
        if (!in(r, c + 1)) edges.insert({{r + 1, c + 1}, {r, c + 1}});
        if (!in(r - 1, c)) edges.insert({{r, c + 1}, {r, c}});
        if (!in(r, c - 1)) edges.insert({{r, c}, {r + 1, c}});
    }

    auto direction = [](const Corner& a, const Corner& b) { return std::pair{b.first - a.first, b.second - a.second}; };
    // Left turn in (lon, lat) for a step (dr, dc): rows point south.
    auto left_of = [](std::pair<int, int> d) { return std::pair{-d.second, d.first}; };

    std::vector<std::vector<Corner>> rings;
    while (!edges.empty()) {
        // Start away from pinch corners (two outgoing edges) so every ring
        // closes on the same left-turn walk that opened it.
        auto it = edges.begin();
        while (it != edges.end() && edges.count(it->first) != 1) ++it;
        if (it == edges.end()) throw InvariantViolation("patch outline has no simple start corner");
        const Corner start = it->first;
        Corner prev = start, cur = it->second;
        edges.erase(it);
        std::vector<Corner> ring{start};
        while (cur != start) {
            ring.push_back(cur);
            const auto d = direction(prev, cur);
            const auto left = left_of(d);
            const std::array<std::pair<int, int>, 3> prefs = {left, d, std::pair{-left.first, -left.second}};
            auto range = edges.equal_range(cur);
            auto chosen = range.second;
            for (const auto& pref : prefs) {
                for (auto e = range.first; e != range.second && chosen == range.second; ++e)
                    if (direction(e->first, e->second) == pref) chosen = e;
                if (chosen != range.second) break;
            }
            if (chosen == range.second) throw InvariantViolation("patch outline is not closed");
            prev = cur;
            cur = chosen->second;
            edges.erase(chosen);
        }
        rings.push_back(std::move(ring));
    }

    PatchOutline out;
    for (auto& ring : rings) {
        // Drop collinear corners.
        std::vector<Corner> simple;
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = ring[(i + n - 1) % n];
            const auto& b = ring[i];
            const auto& c = ring[(i + 1) % n];
            if (direction(a, b) != direction(b, c)) simple.push_back(b);
        }
        geo::GeoRing geo_ring;
        for (const auto& [r, c] : simple) geo_ring.push_back({dem.north(r), dem.west(c)});
        double area = 0.0;
        for (std::size_t i = 0; i < geo_ring.size(); ++i) {
            const auto& a = geo_ring[i];
            const auto& b = geo_ring[(i + 1) % geo_ring.size()];
            area += a.lon_deg * b.lat_deg - b.lon_deg * a.lat_deg;
        }
        if (area > 0 && out.exterior.empty())
            out.exterior = std::move(geo_ring);
        else if (area > 0)
            throw InvariantViolation("patch outline has more than one exterior ring; patch is not 4-connected");
        else
            out.holes.push_back(std::move(geo_ring));
    }
    return out;
}

nlohmann::json patches_geojson(const DemRaster& dem, const std::vector<TerrainPatch>& patches)
{
    std::vector<nlohmann::json> features;
    for (const auto& patch : patches) {
        const auto outline = patch_outline(dem, patch);
        features.push_back(geojson::feature(geojson::polygon_geometry(outline.exterior, outline.holes),
                                            {{"id", patch.id},
                                             {"elev_min_m", patch.elev_min_m},
                                             {"elev_max_m", patch.elev_max_m}}));
    }
    return geojson::feature_collection(std::move(features));
}

} // namespace sarplan::terrain
