#include "wifidop/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wifidop {

namespace {

// Pixel centers that coincide with an AP would ask the forward model for a
// zero distance; treat them as "very close" instead.
constexpr double kMinFieldDistance = 1e-6;

}  // namespace

double CoverageGrid::field_at(std::size_t floor, const std::string& ap_id,
                              std::size_t i, std::size_t j) const {
    if (floor >= floors.size()) {
        throw IndexError("floor index " + std::to_string(floor) + " out of range");
    }
    if (i >= width || j >= height) {
        throw IndexError("pixel index out of range");
    }
    const auto it = floors[floor].field.find(ap_id);
    if (it == floors[floor].field.end()) {
        throw UnknownAp("no field for access point '" + ap_id + "'");
    }
    return it->second[j * width + i];
}

Vec3 CoverageGrid::pixel_center(std::size_t floor, std::size_t i, std::size_t j) const {
    if (floor >= floors.size()) {
        throw IndexError("floor index " + std::to_string(floor) + " out of range");
    }
    return {(static_cast<double>(i) + 0.5) * pixel_size,
            (static_cast<double>(j) + 0.5) * pixel_size, floors[floor].z};
}

CoverageGrid make_coverage_grid(const Environment& env, const PropagationModel& model,
                                std::size_t width, std::size_t height,
                                double pixel_size, const std::vector<double>& floor_heights,
                                double quality_threshold) {
    if (width == 0 || height == 0) {
        throw ValidationError("grid", "width and height must be >= 1");
    }
    if (!(pixel_size > 0.0)) {
        throw ValidationError("pixel_size", "must be > 0");
    }
    if (floor_heights.empty()) {
        throw ValidationError("floors", "at least one floor is required");
    }
    if (!(quality_threshold >= 0.0)) {
        throw ValidationError("quality_threshold", "must be >= 0 mW");
    }

    CoverageGrid grid;
    grid.width = width;
    grid.height = height;
    grid.pixel_size = pixel_size;
    grid.quality_threshold = quality_threshold;
    grid.floors.resize(floor_heights.size());

    for (std::size_t k = 0; k < floor_heights.size(); ++k) {
        FloorField& floor = grid.floors[k];
        floor.z = floor_heights[k];
        for (const auto& ap : env.aps) {
            std::vector<double>& field = floor.field[ap.id];
            field.resize(width * height);
            for (std::size_t j = 0; j < height; ++j) {
                for (std::size_t i = 0; i < width; ++i) {
                    const Vec3 center = grid.pixel_center(k, i, j);
                    const double d =
                        std::max((center - ap.position).norm(), kMinFieldDistance);
                    field[j * width + i] = forward_rss(model, ap, env.receiver, d);
                }
            }
        }
    }
    return grid;
}

bool Cell::contains(int i, int j) const {
    return std::binary_search(pixels.begin(), pixels.end(), std::make_pair(i, j));
}

Cell extract_cell(const CoverageGrid& grid, std::size_t floor, const std::string& ap_id) {
    if (floor >= grid.floors.size()) {
        throw IndexError("floor index " + std::to_string(floor) + " out of range");
    }
    Cell cell;
    cell.floor = static_cast<int>(floor);
    for (std::size_t i = 0; i < grid.width; ++i) {
        for (std::size_t j = 0; j < grid.height; ++j) {
            if (grid.field_at(floor, ap_id, i, j) >= grid.quality_threshold) {
                cell.pixels.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    // (i, j)-major generation order keeps the pixel list sorted.
    return cell;
}

int neighbor_count(const Cell& cell, std::pair<int, int> pixel) {
    if (!cell.contains(pixel.first, pixel.second)) {
        throw InvalidPixel("pixel (" + std::to_string(pixel.first) + ", " +
                           std::to_string(pixel.second) + ") is not in the cell");
    }
    int count = 0;
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            if (di == 0 && dj == 0) {
                continue;
            }
            if (cell.contains(pixel.first + di, pixel.second + dj)) {
                ++count;
            }
        }
    }
    return count;
}

double geometric_indicator(const Cell& cell) {
    const auto n = static_cast<double>(cell.size());
    if (cell.size() <= 1) {
        throw CellTooSmall("compactness indicator needs at least 2 pixels, cell has " +
                           std::to_string(cell.size()));
    }
    double adjacency_sum = 0.0;
    for (const auto& pixel : cell.pixels) {
        adjacency_sum += neighbor_count(cell, pixel);
    }
    return adjacency_sum / (8.0 * n - 6.0 * std::sqrt(std::numbers::pi * n));
}

double wlan_indicator(const std::vector<Cell>& cells) {
    if (cells.empty()) {
        throw CellTooSmall("no cells to aggregate");
    }
    double total = 0.0;
    for (const auto& cell : cells) {
        total += static_cast<double>(cell.size());
    }
    double indicator = 0.0;
    for (const auto& cell : cells) {
        indicator += static_cast<double>(cell.size()) / total * geometric_indicator(cell);
    }
    return indicator;
}

}  // namespace wifidop
