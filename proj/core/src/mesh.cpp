#include "conflate/mesh.hpp"

#include <cmath>
#include <string>

namespace conflate {

void TriangleMesh::validate() const {
    const int n = static_cast<int>(vertices.size());
    for (const Vec3& v : vertices) {
        if (!v.allFinite()) throw std::runtime_error("mesh: non-finite vertex coordinate");
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& face = faces[f];
        for (int idx : face) {
            if (idx < 0 || idx >= n) {
                throw std::runtime_error("mesh: face " + std::to_string(f) +
                                         " references vertex " + std::to_string(idx) +
                                         " of " + std::to_string(n));
            }
        }
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
            throw std::runtime_error("mesh: face " + std::to_string(f) + " repeats a vertex index");
        }
    }
}

std::size_t drop_degenerate_faces(TriangleMesh& mesh) {
    std::size_t kept = 0;
    for (const auto& face : mesh.faces) {
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) continue;
        const double area =
            triangle_area(mesh.vertex(face[0]), mesh.vertex(face[1]), mesh.vertex(face[2]));
        if (area <= kDegenerateAreaThreshold) continue;
        mesh.faces[kept++] = face;
    }
    const std::size_t dropped = mesh.faces.size() - kept;
    mesh.faces.resize(kept);
    return dropped;
}

Aabb mesh_bounds(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) throw std::runtime_error("mesh_bounds: empty mesh");
    Aabb box;
    for (const Vec3& v : mesh.vertices) box.extend(v);
    return box;
}

double mesh_surface_area(const TriangleMesh& mesh) {
    double area = 0.0;
    for (const auto& f : mesh.faces) {
        area += triangle_area(mesh.vertex(f[0]), mesh.vertex(f[1]), mesh.vertex(f[2]));
    }
    return area;
}

void append_mesh(TriangleMesh& mesh, const TriangleMesh& other) {
    const int base = static_cast<int>(mesh.vertices.size());
    mesh.vertices.insert(mesh.vertices.end(), other.vertices.begin(), other.vertices.end());
    mesh.faces.reserve(mesh.faces.size() + other.faces.size());
    for (const auto& f : other.faces) {
        mesh.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
    }
}

}  // namespace conflate
