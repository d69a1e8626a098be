#pragma once

#include "conflate/geometry.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace conflate {

/// Indexed triangle surface in a common world frame (meters). May be open and
/// non-manifold; winding carries no meaning anywhere in this library.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<Vec3> normals;  // optional, ignored by the pipeline

    bool empty() const { return faces.empty(); }
    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return faces.size(); }

    const Vec3& vertex(int i) const { return vertices[static_cast<std::size_t>(i)]; }

    /// Throws std::runtime_error on any invariant violation: out-of-range face
    /// index, repeated index within a face, or non-finite coordinate.
    void validate() const;
};

constexpr double kDegenerateAreaThreshold = 1e-12;  // m^2

/// Removes faces with repeated indices or area <= kDegenerateAreaThreshold.
/// Returns the number of faces dropped.
std::size_t drop_degenerate_faces(TriangleMesh& mesh);

/// Tight componentwise bounds over all vertices. Throws on an empty mesh.
Aabb mesh_bounds(const TriangleMesh& mesh);

double mesh_surface_area(const TriangleMesh& mesh);

/// Appends a copy of `other` into `mesh`, reindexing faces.
void append_mesh(TriangleMesh& mesh, const TriangleMesh& other);

}  // namespace conflate
