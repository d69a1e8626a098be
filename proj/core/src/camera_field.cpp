#include "conflate/camera_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace conflate {

int find_high_cell(const HeightLayer& layer, int i, int j, int phi) {
    const int i0 = std::max(0, i - phi);
    const int i1 = std::min(layer.p, i + phi);
    const int j0 = std::max(0, j - phi);
    const int j1 = std::min(layer.q, j + phi);
    int z = -1;
    for (int jj = j0; jj < j1; ++jj) {
        for (int ii = i0; ii < i1; ++ii) {
            z = std::max(z, layer.at(ii, jj));
        }
    }
    return z;
}

std::vector<VirtualCamera> sample_camera_centers(const HeightLayer& layer,
                                                 const OccupancyGrid& grid, int phi) {
    if (phi < 1) throw std::runtime_error("sample_camera_centers: phi must be >= 1");
    const int p = layer.p;
    const int q = layer.q;

    HeightLayer begin_k;
    begin_k.p = p;
    begin_k.q = q;
    begin_k.top.resize(static_cast<std::size_t>(p) * q);
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < p; ++i) begin_k.at(i, j) = find_high_cell(layer, i, j, phi);

    std::vector<VirtualCamera> cameras;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < q; ++j) {
            const int end_k = find_high_cell(begin_k, i, j, phi) + 1;
            if (end_k == 0) continue;  // no geometry anywhere in reach
            int previous_z = -1;
            for (int k = begin_k.at(i, j); k < end_k; ++k) {
                int z = k + 1;
                while (grid.occupied(i, j, z)) ++z;
                if (z == previous_z) continue;  // lift collided with the next yield
                previous_z = z;
                cameras.push_back({grid.cell_center(i, j, z), Vec3i(i, j, k)});
            }
        }
    }
    return cameras;
}

DirectionSet fibonacci_directions(std::size_t n) {
    if (n < 1) throw std::runtime_error("fibonacci_directions: n must be >= 1");
    DirectionSet set;
    set.directions.reserve(n);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double azimuth = static_cast<double>(i) * golden_angle;
        set.directions.emplace_back(radius * std::cos(azimuth), radius * std::sin(azimuth), z);
    }
    return set;
}

}  // namespace conflate
