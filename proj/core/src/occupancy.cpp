#include "conflate/occupancy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace conflate {

namespace {

int floor_index(double local) { return static_cast<int>(std::floor(local)); }

// Index of the last candidate cell along one axis for a value at `local`
// (already divided by cell size). Values exactly on a cell boundary bind to
// the lower cell so geometry never spills past its own upper bounds.
int upper_index(double local) {
    const double f = std::floor(local);
    if (f == local) return static_cast<int>(f) - 1;
    return static_cast<int>(f);
}

}  // namespace

std::size_t OccupancyGrid::occupied_count() const {
    std::size_t n = 0;
    for (std::uint8_t c : cells) n += c != 0;
    return n;
}

std::vector<Vec3> OccupancyGrid::occupied_cell_centers() const {
    std::vector<Vec3> centers;
    centers.reserve(occupied_count());
    for (int k = 0; k < dims.z(); ++k)
        for (int j = 0; j < dims.y(); ++j)
            for (int i = 0; i < dims.x(); ++i)
                if (cells[index(i, j, k)]) centers.push_back(cell_center(i, j, k));
    return centers;
}

OccupancyGrid build_occupancy(std::span<const TriangleMesh> meshes, double cell_size,
                              int pad_cells, std::size_t max_cells) {
    if (!(cell_size > 0.0)) throw std::runtime_error("build_occupancy: cell_size must be > 0");
    if (pad_cells < 1) throw std::runtime_error("build_occupancy: pad_cells must be >= 1");

    Aabb bounds;
    for (const TriangleMesh& mesh : meshes) {
        if (!mesh.empty()) bounds.extend(mesh_bounds(mesh));
    }
    if (bounds.empty()) throw std::runtime_error("build_occupancy: all meshes empty");

    OccupancyGrid grid;
    grid.cell_size = cell_size;
    grid.origin = bounds.min - cell_size * Vec3::Constant(pad_cells);
    const Vec3 span = bounds.diagonal();
    for (int a = 0; a < 3; ++a) {
        const int interior = std::max(1, static_cast<int>(std::ceil(span[a] / cell_size)));
        grid.dims[a] = interior + 2 * pad_cells;
    }

    const std::size_t total = static_cast<std::size_t>(grid.dims.x()) *
                              static_cast<std::size_t>(grid.dims.y()) *
                              static_cast<std::size_t>(grid.dims.z());
    if (total > max_cells) {
        throw std::runtime_error("build_occupancy: grid of " + std::to_string(total) +
                                 " cells exceeds budget of " + std::to_string(max_cells));
    }
    grid.cells.assign(total, 0);

    const Vec3 half = Vec3::Constant(0.5 * cell_size);
    for (const TriangleMesh& mesh : meshes) {
        for (const auto& face : mesh.faces) {
            const Vec3& a = mesh.vertex(face[0]);
            const Vec3& b = mesh.vertex(face[1]);
            const Vec3& c = mesh.vertex(face[2]);

            Vec3 lo = a.cwiseMin(b).cwiseMin(c);
            Vec3 hi = a.cwiseMax(b).cwiseMax(c);
            int cell_lo[3], cell_hi[3];
            for (int axis = 0; axis < 3; ++axis) {
                const double l0 = (lo[axis] - grid.origin[axis]) / cell_size;
                const double l1 = (hi[axis] - grid.origin[axis]) / cell_size;
                cell_lo[axis] = std::max(0, floor_index(l0));
                cell_hi[axis] = std::min(grid.dims[axis] - 1,
                                         std::max(cell_lo[axis], upper_index(l1)));
            }
            for (int k = cell_lo[2]; k <= cell_hi[2]; ++k) {
                for (int j = cell_lo[1]; j <= cell_hi[1]; ++j) {
                    for (int i = cell_lo[0]; i <= cell_hi[0]; ++i) {
                        std::uint8_t& cell = grid.cells[grid.index(i, j, k)];
                        if (cell) continue;
                        if (triangle_box_overlap(grid.cell_center(i, j, k), half, a, b, c)) {
                            cell = 1;
                        }
                    }
                }
            }
        }
    }
    return grid;
}

HeightLayer top_height_layer(const OccupancyGrid& grid) {
    HeightLayer layer;
    layer.p = grid.dims.x();
    layer.q = grid.dims.y();
    layer.top.assign(static_cast<std::size_t>(layer.p) * layer.q, -1);
    for (int k = grid.dims.z() - 1; k >= 0; --k) {
        for (int j = 0; j < grid.dims.y(); ++j) {
            for (int i = 0; i < grid.dims.x(); ++i) {
                if (layer.at(i, j) < 0 && grid.cells[grid.index(i, j, k)]) {
                    layer.at(i, j) = k;
                }
            }
        }
    }
    return layer;
}

}  // namespace conflate
