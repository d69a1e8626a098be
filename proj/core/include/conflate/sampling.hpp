#pragma once

#include "conflate/mesh.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace conflate {

/// splitmix64 sequence; self-contained so sampling is reproducible across
/// standard libraries and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Points drawn area-uniformly from a source mesh surface.
struct SurfaceSampleSet {
    std::vector<Vec3> points;
    std::string source;
    std::uint64_t seed = 0;

    std::size_t count() const { return points.size(); }
};

/// Draws exactly `count` area-uniform samples: triangle chosen with
/// probability proportional to area, then a uniform barycentric point.
/// Deterministic for a fixed seed. Throws on an empty mesh, count < 1, or
/// zero total surface area.
SurfaceSampleSet sample_surface_points(const TriangleMesh& mesh, std::size_t count,
                                       std::uint64_t seed, std::string_view source_id = {});

}  // namespace conflate
