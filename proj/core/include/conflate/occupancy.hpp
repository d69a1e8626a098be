#pragma once

#include "conflate/mesh.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace conflate {

/// Coarse boolean voxelization over the union of the input meshes. World Z is
/// up; inputs are expected in that convention.
struct OccupancyGrid {
    Vec3 origin = Vec3::Zero();  // world position of cell (0,0,0)'s min corner
    double cell_size = 0.0;
    Vec3i dims = Vec3i::Zero();  // (p, q, r) cell counts
    std::vector<std::uint8_t> cells;

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * static_cast<std::size_t>(dims.y()) +
                static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(dims.x()) +
               static_cast<std::size_t>(i);
    }

    bool in_bounds(int i, int j, int k) const {
        return i >= 0 && j >= 0 && k >= 0 && i < dims.x() && j < dims.y() && k < dims.z();
    }

    /// Cells outside the grid count as unoccupied.
    bool occupied(int i, int j, int k) const {
        return in_bounds(i, j, k) && cells[index(i, j, k)] != 0;
    }

    Vec3 cell_center(int i, int j, int k) const {
        return origin + cell_size * Vec3(i + 0.5, j + 0.5, k + 0.5);
    }

    Vec3i world_to_cell(const Vec3& p) const {
        const Vec3 local = (p - origin) / cell_size;
        return Vec3i(static_cast<int>(std::floor(local.x())),
                     static_cast<int>(std::floor(local.y())),
                     static_cast<int>(std::floor(local.z())));
    }

    std::size_t occupied_count() const;
    std::vector<Vec3> occupied_cell_centers() const;
};

/// Per-column index of the highest occupied cell; -1 for empty columns.
struct HeightLayer {
    int p = 0, q = 0;
    std::vector<int> top;

    int at(int i, int j) const { return top[static_cast<std::size_t>(j) * p + i]; }
    int& at(int i, int j) { return top[static_cast<std::size_t>(j) * p + i]; }
};

constexpr std::size_t kDefaultCellBudget = 1ull << 30;

/// Marks every cell geometrically overlapped by a triangle (conservative
/// separating-axis test). The grid covers the union bounds padded by
/// `pad_cells` on every side. A triangle feature lying exactly in a cell
/// boundary plane binds to the upper cell and never spills past its own
/// bounds' upper boundary.
OccupancyGrid build_occupancy(std::span<const TriangleMesh> meshes, double cell_size,
                              int pad_cells = 1, std::size_t max_cells = kDefaultCellBudget);

HeightLayer top_height_layer(const OccupancyGrid& grid);

}  // namespace conflate
