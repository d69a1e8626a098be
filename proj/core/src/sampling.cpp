#include "conflate/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace conflate {

SurfaceSampleSet sample_surface_points(const TriangleMesh& mesh, std::size_t count,
                                       std::uint64_t seed, std::string_view source_id) {
    if (mesh.empty()) throw std::runtime_error("sample_surface_points: empty mesh");
    if (count < 1) throw std::runtime_error("sample_surface_points: count must be >= 1");

    std::vector<double> cumulative(mesh.faces.size());
    double total = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& face = mesh.faces[f];
        total += triangle_area(mesh.vertex(face[0]), mesh.vertex(face[1]), mesh.vertex(face[2]));
        cumulative[f] = total;
    }
    if (!(total > 0.0)) throw std::runtime_error("sample_surface_points: zero total area");

    SurfaceSampleSet out;
    out.source = std::string(source_id);
    out.seed = seed;
    out.points.reserve(count);

    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const double pick = rng.uniform() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        const std::size_t f = std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative.begin()), mesh.faces.size() - 1);
        const auto& face = mesh.faces[f];

        double u = rng.uniform();
        double v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const Vec3& a = mesh.vertex(face[0]);
        out.points.push_back(a + u * (mesh.vertex(face[1]) - a) + v * (mesh.vertex(face[2]) - a));
    }
    return out;
}

}  // namespace conflate
