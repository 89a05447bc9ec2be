#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wifidop/propagation.hpp"
#include "wifidop/radio.hpp"

namespace wifidop {

/// Field strengths of one horizontal grid slice. Pixel (i, j) covers the square
/// centered at ((i+0.5)*pixel_size, (j+0.5)*pixel_size) at height z.
struct FloorField {
    double z = 0.0;  // receiver height of this slice, meters
    std::map<std::string, std::vector<double>> field;  // AP id -> row-major mW, size width*height
};

struct CoverageGrid {
    std::size_t width = 0;   // pixels along x
    std::size_t height = 0;  // pixels along y
    double pixel_size = 1.0;       // meters
    double quality_threshold = 0;  // q, milliwatts
    std::vector<FloorField> floors;

    double field_at(std::size_t floor, const std::string& ap_id,
                    std::size_t i, std::size_t j) const;
    Vec3 pixel_center(std::size_t floor, std::size_t i, std::size_t j) const;
};

/// Fills a grid with free-space field strengths predicted by forward_rss for
/// every AP at every pixel center of every floor slice.
CoverageGrid make_coverage_grid(const Environment& env, const PropagationModel& model,
                                std::size_t width, std::size_t height,
                                double pixel_size, const std::vector<double>& floor_heights,
                                double quality_threshold);

/// The set of pixels of one floor where one AP's field meets the quality
/// threshold. Pixels are kept sorted by (i, j).
struct Cell {
    int floor = 0;
    std::vector<std::pair<int, int>> pixels;

    bool contains(int i, int j) const;
    std::size_t size() const { return pixels.size(); }
};

/// Pixels with field >= quality_threshold for the given AP on the given floor.
/// Throws IndexError for an invalid floor and UnknownAp for an unknown AP.
Cell extract_cell(const CoverageGrid& grid, std::size_t floor, const std::string& ap_id);

/// Number of the pixel's 8 Moore neighbors that belong to the cell (border
/// pixels simply have fewer in-cell neighbors). Throws InvalidPixel when the
/// pixel is not a cell member.
int neighbor_count(const Cell& cell, std::pair<int, int> pixel);

/// Compactness indicator G'(C) = sum_b V(b) / (8|C| - 6*sqrt(pi*|C|)).
/// Requires |C| >= 2 (the denominator is nonpositive for |C| = 1); throws
/// CellTooSmall otherwise. Note that G' may exceed 1 for very small cells
/// (|C| <= 8): the normalization targets disc-like cells.
double geometric_indicator(const Cell& cell);

/// Size-weighted mean of the per-floor indicators:
/// G_WLAN = sum_k (|C_k|/|C|) * G'(C_k), |C| = sum_k |C_k|.
double wlan_indicator(const std::vector<Cell>& cells);

}  // namespace wifidop
