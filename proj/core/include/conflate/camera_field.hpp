#pragma once

#include "conflate/occupancy.hpp"

#include <vector>

namespace conflate {

/// A panoramic camera center in free space, plus the grid cell that spawned it.
struct VirtualCamera {
    Vec3 center = Vec3::Zero();
    Vec3i cell = Vec3i::Zero();  // (i, j, k) yielded by the placement scan
};

/// Unit ray directions shared by every camera.
struct DirectionSet {
    std::vector<Vec3> directions;

    std::size_t count() const { return directions.size(); }
};

/// Maximum column top over the half-open window [i-phi, i+phi) x [j-phi,
/// j+phi), clamped to the layer bounds; -1 when the whole window is empty.
int find_high_cell(const HeightLayer& layer, int i, int j, int phi);

/// Deterministic top-down placement over the height layer. Each column scans
/// k from its windowed high cell up to (but excluding) the neighborhood
/// maximum plus one; columns whose whole end-window is empty yield nothing.
/// A column whose own window is empty but whose neighborhood is not starts at
/// k = -1, which produces a camera at the grid floor. Each yielded cell
/// places a camera one cell above it, lifted further while occupied.
std::vector<VirtualCamera> sample_camera_centers(const HeightLayer& layer,
                                                 const OccupancyGrid& grid, int phi);

/// n near-uniform unit vectors on the sphere by the Fibonacci lattice:
/// z_i = 1 - 2(i+0.5)/n, azimuth_i = i * pi * (3 - sqrt(5)).
DirectionSet fibonacci_directions(std::size_t n);

}  // namespace conflate
