#include <doctest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sarplan/error.hpp"
#include "sarplan/terrain.hpp"

using namespace sarplan;
using namespace sarplan::terrain;

namespace {

constexpr double kCell = 0.0001;

DemRaster grid(int rows, int cols, std::vector<double> v, double nodata = -9999)
{
    return DemRaster(cols, rows, 135.0, 35.0, kCell, nodata, std::move(v));
}

// AOI covering every cell center of the raster (inset by a quarter cell).
geo::GeoPolygon whole(const DemRaster& d)
{
    const double w = d.xllcorner() + 0.25 * kCell, e = d.xllcorner() + (d.ncols() - 0.25) * kCell;
    const double s = d.yllcorner() + 0.25 * kCell, n = d.yllcorner() + (d.nrows() - 0.25) * kCell;
    return geo::GeoPolygon({{s, w}, {s, e}, {n, e}, {n, w}});
}

bool four_connected(const std::vector<Cell>& cells)
{
    std::set<Cell> all(cells.begin(), cells.end()), seen;
    std::queue<Cell> q;
    q.push(cells.front());
    seen.insert(cells.front());
    while (!q.empty()) {
        const auto c = q.front();
        q.pop();
        for (auto [dr, dc] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            const Cell n{c.row + dr, c.col + dc};
            if (all.count(n) && seen.insert(n).second) q.push(n);
        }
    }
    return seen.size() == all.size();
}

void check_decomposition(const DemRaster& dem, const Decomposition& d, double max_range)
{
    std::set<Cell> covered;
    for (const auto& p : d.patches) {
        REQUIRE_FALSE(p.cells.empty());
        double lo = 1e300, hi = -1e300;
        for (const auto& c : p.cells) {
            CHECK(covered.insert(c).second); // disjoint
            lo = std::min(lo, dem.at(c.row, c.col));
            hi = std::max(hi, dem.at(c.row, c.col));
        }
        CHECK(p.elev_min_m == lo);
        CHECK(p.elev_max_m == hi);
        CHECK(hi - lo <= max_range);
        CHECK(four_connected(p.cells));
        CHECK(std::is_sorted(p.cells.begin(), p.cells.end()));
    }
    for (const auto& c : d.unplannable) CHECK(covered.insert(c).second);
    CHECK(covered == std::set<Cell>(d.aoi_cells.begin(), d.aoi_cells.end()));
}

} // namespace

TEST_CASE("parse_asc_dem: 2x2 grid")
{
    const auto dem = parse_asc_dem(
        "ncols 2\nnrows 2\nxllcorner 135\nyllcorner 35\ncellsize 0.001\nNODATA_value -9999\n10 20\n30 40\n");
    CHECK(dem.ncols() == 2);
    CHECK(dem.nrows() == 2);
    CHECK(dem.at(0, 0) == 10);
    CHECK(dem.at(0, 1) == 20);
    CHECK(dem.at(1, 0) == 30);
    CHECK(dem.at(1, 1) == 40);
    CHECK(dem.nodata() == -9999);
}

TEST_CASE("parse_asc_dem: value count error names the data line")
{
    try {
        parse_asc_dem("ncols 3\nnrows 2\nxllcorner 135\nyllcorner 35\ncellsize 0.001\nNODATA_value -9999\n10 20\n30 40\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
    }
}

TEST_CASE("parse_asc_dem: header order and case do not matter")
{
    const auto a = parse_asc_dem(
        "ncols 2\nnrows 2\nxllcorner 135\nyllcorner 35\ncellsize 0.001\nNODATA_value -9999\n10 20\n30 40\n");
    const auto b = parse_asc_dem(
        "nodata_value -9999\r\nCELLSIZE 0.001\r\nyllcorner 35\r\nNROWS 2\r\nxllcorner 135\r\nncols 2\r\n10 20\r\n30 40\r\n");
    CHECK(a == b);
}

TEST_CASE("parse_asc_dem: errors")
{
    CHECK_THROWS_AS(parse_asc_dem("ncols 2\nnrows 2\nxllcorner 135\nyllcorner 35\ncellsize 0.001\n10 20\n30 40\n"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_asc_dem("ncols 2\nnrows 2\nxllcorner 135\nyllcorner 35\ncellsize 0.001\nNODATA_value -9999\n10 2x\n30 40\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_asc_dem("ncols 2\nnrows 2\nxllcorner 135\nyllcorner 35\ncellsize 0.001\nNODATA_value -9999\n10 20\n"),
        ParseError);
    CHECK_THROWS(parse_asc_dem("ncols 1\nnrows 2\nxllcorner 135\nyllcorner 35\ncellsize 0.001\nNODATA_value -9999\n1\n2\n"));
}

TEST_CASE("property: parse -> serialize -> parse is the identity")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> z(-400, 8800);
    std::uniform_int_distribution<int> n(2, 40);
    for (int k = 0; k < 50; ++k) {
        const int rows = n(rng), cols = n(rng);
        std::vector<double> v(static_cast<std::size_t>(rows) * cols);
        for (auto& x : v) x = (rng() % 10 == 0) ? -9999.0 : z(rng);
        const DemRaster dem(cols, rows, 100.0 + z(rng) * 1e-3, -30.0 + z(rng) * 1e-3, 1.0 / 3600.0, -9999.0, v);
        const auto text = serialize_asc_dem(dem);
        const auto back = parse_asc_dem(text);
        CHECK(back == dem);
        CHECK(serialize_asc_dem(back) == text);
    }
}

TEST_CASE("elevation_at: center, midpoint, extent and nodata")
{
    const auto dem = grid(2, 3, {10, 20, 20, 10, 20, -9999});
    CHECK(elevation_at(dem, dem.cell_center(0, 0)) == 10.0);
    CHECK(elevation_at(dem, dem.cell_center(1, 1)) == 20.0);
    const auto a = dem.cell_center(0, 0), b = dem.cell_center(0, 1);
    CHECK(elevation_at(dem, {a.lat_deg, 0.5 * (a.lon_deg + b.lon_deg)}) == doctest::Approx(15.0));
    const auto c = dem.cell_center(1, 0);
    CHECK(elevation_at(dem, {0.5 * (a.lat_deg + c.lat_deg), 0.5 * (a.lon_deg + b.lon_deg)}) == doctest::Approx(15.0));
    CHECK_THROWS_AS(elevation_at(dem, {35.0 - kCell, 135.0001}), RangeError);
    CHECK_THROWS_AS(elevation_at(dem, dem.cell_center(1, 2)), RangeError);
}

TEST_CASE("elevation_at: matches a hand bilinear oracle")
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> z(0, 1000), u(0, 1);
    std::vector<double> v(25);
    for (auto& x : v) x = z(rng);
    const auto dem = grid(5, 5, v);
    for (int i = 0; i < 500; ++i) {
        const double fr = u(rng) * 4, fc = u(rng) * 4; // fractional row/col between centers
        const int r0 = std::min(3, static_cast<int>(fr)), c0 = std::min(3, static_cast<int>(fc));
        const double tr = fr - r0, tc = fc - c0;
        const double expect = (1 - tr) * ((1 - tc) * v[r0 * 5 + c0] + tc * v[r0 * 5 + c0 + 1])
                              + tr * ((1 - tc) * v[(r0 + 1) * 5 + c0] + tc * v[(r0 + 1) * 5 + c0 + 1]);
        const geo::GeoPoint p{35.0 + (5 - 0.5 - fr) * kCell, 135.0 + (0.5 + fc) * kCell};
        CHECK(elevation_at(dem, p) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("max_elev_range_for_gsd_tolerance")
{
    CHECK(max_elev_range_for_gsd_tolerance(40, 0.10) == doctest::Approx(4.0));
    CHECK(max_elev_range_for_gsd_tolerance(100, 0.10) == doctest::Approx(10.0));
    CHECK_THROWS_AS(max_elev_range_for_gsd_tolerance(40, 0.0), InvalidParameter);
    CHECK_THROWS_AS(max_elev_range_for_gsd_tolerance(40, 0.6), InvalidParameter);
    CHECK_THROWS_AS(max_elev_range_for_gsd_tolerance(0, 0.1), InvalidParameter);
}

TEST_CASE("decompose: flat terrain gives one patch for any threshold")
{
    const auto dem = grid(30, 40, std::vector<double>(1200, 250.0));
    for (double t : {0.001, 1.0, 4.0, 100.0}) {
        const auto d = decompose_stairstep(dem, whole(dem), t);
        REQUIRE(d.patches.size() == 1);
        CHECK(d.patches[0].cells.size() == 1200);
        CHECK(d.unplannable.empty());
        check_decomposition(dem, d, t);
    }
}

TEST_CASE("decompose: two-level terrain splits at the step")
{
    const int rows = 20, cols = 30;
    std::vector<double> v(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) v[r * cols + c] = c < cols / 2 ? 100.0 : 130.0;
    const auto dem = grid(rows, cols, v);
    const auto d = decompose_stairstep(dem, whole(dem), 10.0);
    REQUIRE(d.patches.size() == 2);
    check_decomposition(dem, d, 10.0);
    for (const auto& p : d.patches) {
        CHECK(p.cells.size() == static_cast<std::size_t>(rows * cols / 2));
        const bool west = p.elev_max_m == 100.0;
        for (const auto& c : p.cells) CHECK((c.col < cols / 2) == west);
    }
}

TEST_CASE("decompose: nodata-only AOI is entirely unplannable")
{
    const auto dem = grid(10, 10, std::vector<double>(100, -9999.0));
    const auto d = decompose_stairstep(dem, whole(dem), 5.0);
    CHECK(d.patches.empty());
    CHECK(d.unplannable.size() == 100);
}

TEST_CASE("decompose: errors")
{
    const auto dem = grid(10, 10, std::vector<double>(100, 1.0));
    const geo::GeoPolygon far({{36.0, 136.0}, {36.0, 136.001}, {36.001, 136.001}});
    CHECK_THROWS_AS(decompose_stairstep(dem, far, 5.0), RangeError);
    // inside the extent but between cell centers
    const double s = 35.0 + 0.1 * kCell, w = 135.0 + 0.1 * kCell;
    const geo::GeoPolygon tiny({{s, w}, {s, w + 0.2 * kCell}, {s + 0.2 * kCell, w + 0.2 * kCell}});
    CHECK_THROWS_AS(decompose_stairstep(dem, tiny, 5.0), RangeError);
    CHECK_THROWS_AS(decompose_stairstep(dem, whole(dem), 0.0), InvalidParameter);
}

TEST_CASE("decompose: a small cliff patch wedged between neighbours is unplannable")
{
    // 100 m west, 160 m east, a two-cell-wide 130 m ledge in between
    const int rows = 12, cols = 20;
    std::vector<double> v(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) v[r * cols + c] = c < 9 ? 100.0 : (c < 10 && r < 2 ? 130.0 : 160.0);
    const auto dem = grid(rows, cols, v);
    const auto d = decompose_stairstep(dem, whole(dem), 10.0);
    check_decomposition(dem, d, 10.0);
    CHECK(d.patches.size() == 2);
    CHECK(d.unplannable.size() == 2);
}

TEST_CASE("property: random mountains are partitioned within the bound")
{
    std::mt19937_64 rng(23);
    for (int k = 0; k < 20; ++k) {
        const int rows = 20 + static_cast<int>(rng() % 40), cols = 20 + static_cast<int>(rng() % 40);
        auto v = oracle::mountains(rng, rows, cols, 200.0);
        for (auto& x : v)
            if (rng() % 97 == 0) x = -9999.0;
        const auto dem = grid(rows, cols, v);
        for (double t : {2.0, 8.0, 30.0}) check_decomposition(dem, decompose_stairstep(dem, whole(dem), t), t);
    }
}

TEST_CASE("property: decomposition is deterministic")
{
    std::mt19937_64 rng(24);
    const auto dem = grid(40, 50, oracle::mountains(rng, 40, 50, 150.0));
    const auto a = decompose_stairstep(dem, whole(dem), 5.0);
    const auto b = decompose_stairstep(dem, whole(dem), 5.0);
    REQUIRE(a.patches.size() == b.patches.size());
    for (std::size_t i = 0; i < a.patches.size(); ++i) CHECK(a.patches[i].cells == b.patches[i].cells);
    CHECK(patches_geojson(dem, a.patches) == patches_geojson(dem, b.patches));
}

TEST_CASE("patch_outline: area and hole orientation")
{
    // ring of 120 around a 100 m core cell block
    const int n = 7;
    std::vector<double> v(n * n, 120.0);
    for (int r = 2; r < 5; ++r)
        for (int c = 2; c < 5; ++c) v[r * n + c] = 100.0;
    const auto dem = grid(n, n, v);
    const auto d = decompose_stairstep(dem, whole(dem), 5.0);
    REQUIRE(d.patches.size() == 2);
    for (const auto& p : d.patches) {
        const auto outline = patch_outline(dem, p);
        auto area = [](const geo::GeoRing& ring) {
            std::vector<oracle::P> pts;
            for (auto g : ring) pts.push_back({g.lon_deg, g.lat_deg});
            return oracle::shoelace(pts);
        };
        double a = area(outline.exterior);
        CHECK(a > 0);
        for (const auto& h : outline.holes) {
            CHECK(area(h) < 0);
            a += area(h);
        }
        CHECK(a == doctest::Approx(p.cells.size() * kCell * kCell).epsilon(1e-9));
    }
    const auto fc = patches_geojson(dem, d.patches);
    REQUIRE(fc["features"].size() == 2);
    const auto& props = fc["features"][0]["properties"];
    CHECK(props.contains("id"));
    CHECK(props.contains("elev_min_m"));
    CHECK(props.contains("elev_max_m"));
}

TEST_CASE("property: raising the threshold never increases the region count")
{
    std::mt19937_64 rng(25);
    for (int k = 0; k < 30; ++k) {
        const int rows = 20 + static_cast<int>(rng() % 30), cols = 20 + static_cast<int>(rng() % 30);
        auto v = oracle::mountains(rng, rows, cols, 150.0);
        if (k % 3 == 0)
            for (auto& x : v) x = std::round(x / 5.0) * 5.0; // terraces produce ties
        const auto dem = grid(rows, cols, v);
        std::size_t prev_raw = SIZE_MAX;
        for (double t = 0.5; t <= 200.0; t *= 1.2) {
            DecomposeOptions no_cliff;
            no_cliff.min_patch_cells = 1;
            const auto raw = decompose_stairstep(dem, whole(dem), t, no_cliff).patches.size();
            const auto d = decompose_stairstep(dem, whole(dem), t);
            CHECK(raw <= prev_raw);
            CHECK(d.patches.size() + d.cliff_regions == raw);
            prev_raw = raw;
        }
    }
}

TEST_CASE("cliff rule can raise the kept-patch count as the threshold grows")
{
    // A 3 m/column ramp: at 2 m every region is a column sliver under the
    // minimum size and is dropped; at 50 m the ramp is one patch.
    const int rows = 6, cols = 12;
    std::vector<double> v(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) v[r * cols + c] = 100.0 + 3.0 * c;
    const auto dem = grid(rows, cols, v);
    CHECK(decompose_stairstep(dem, whole(dem), 2.0).patches.empty());
    CHECK(decompose_stairstep(dem, whole(dem), 50.0).patches.size() == 1);
}
