#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sarplan/geo.hpp"

namespace sarplan::terrain {

struct Cell {
    int row = 0;
    int col = 0;

    auto operator<=>(const Cell&) const = default;
};

// Geographic ESRI-style elevation grid. Row 0 is the northernmost row;
// (xllcorner, yllcorner) is the lower-left corner of the lower-left cell.
class DemRaster {
public:
    DemRaster(int ncols, int nrows, double xllcorner, double yllcorner, double cellsize, double nodata,
              std::vector<double> values);

    int ncols() const noexcept { return ncols_; }
    int nrows() const noexcept { return nrows_; }
    double xllcorner() const noexcept { return xll_; }
    double yllcorner() const noexcept { return yll_; }
    double cellsize() const noexcept { return cellsize_; }
    double nodata() const noexcept { return nodata_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double at(int row, int col) const { return values_[index(row, col)]; }
    bool is_nodata(int row, int col) const { return at(row, col) == nodata_; }
    std::size_t index(int row, int col) const
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(col);
    }

    geo::GeoPoint cell_center(int row, int col) const;
    // Cell square corners in degrees: west/east longitude, south/north latitude.
    double west(int col) const { return xll_ + col * cellsize_; }
    double north(int row) const { return yll_ + (nrows_ - row) * cellsize_; }

    bool operator==(const DemRaster&) const = default;

private:
    int ncols_;
    int nrows_;
    double xll_;
    double yll_;
    double cellsize_;
    double nodata_;
    std::vector<double> values_;
};

// ESRI ASCII grid. Header keys are case-insensitive and may come in any
// order; each data line must carry exactly ncols values. Errors carry the
// 1-based line number.
DemRaster parse_asc_dem(std::string_view text);
std::string serialize_asc_dem(const DemRaster& dem);

// Bilinear interpolation over the four nearest cell centers. Beyond the
// outermost centers the edge value is held. Throws RangeError outside the
// raster extent or when a contributing cell is nodata.
double elevation_at(const DemRaster& dem, geo::GeoPoint p);

// Largest patch elevation range that keeps GSD within the tolerance when the
// patch is flown at elev_max + AGL.
double max_elev_range_for_gsd_tolerance(double agl_nominal_m, double gsd_tolerance_fraction);

struct TerrainPatch {
    int id = 0;
    std::vector<Cell> cells; // sorted by (row, col)
    double elev_min_m = 0.0;
    double elev_max_m = 0.0;
};

struct DecomposeOptions {
    // Patches smaller than this that are boxed in by steeper neighbours are
    // reported unplannable (cliff rule).
    std::size_t min_patch_cells = 9;
};

struct Decomposition {
    std::vector<TerrainPatch> patches;
    std::vector<Cell> unplannable; // sorted by (row, col)
    std::vector<Cell> aoi_cells;   // sorted by (row, col)
    std::size_t cliff_regions = 0; // regions dropped by the cliff rule
};

// Cells whose centers fall inside the AOI, sorted by (row, col).
std::vector<Cell> aoi_cells(const DemRaster& dem, const geo::GeoPolygon& aoi);

// Stair-step decomposition: quadtree split of the AOI cell window into level
// blocks, then agglomerative merging of 4-adjacent regions, smallest merged
// elevation range first, while that range stays within max_range_m.
Decomposition decompose_stairstep(const DemRaster& dem, const geo::GeoPolygon& aoi, double max_range_m,
                                  const DecomposeOptions& options = {});

struct PatchOutline {
    geo::GeoRing exterior;
    std::vector<geo::GeoRing> holes;
};

// Boundary of the union of the patch's cell squares, collinear vertices
// removed. Rings are oriented exterior CCW, holes CW.
PatchOutline patch_outline(const DemRaster& dem, const TerrainPatch& patch);

// FeatureCollection with one Polygon per patch, properties {id, elev_min_m, elev_max_m}.
nlohmann::json patches_geojson(const DemRaster& dem, const std::vector<TerrainPatch>& patches);

} // namespace sarplan::terrain
