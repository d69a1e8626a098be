#pragma once

#include "conflate/mesh.hpp"

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace conflate {

/// I/O failure with a category prefix in the message: "file not found",
/// "unsupported format", "malformed header", "malformed body", "empty mesh",
/// or "write failed".
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MeshFormat { BinaryPly, AsciiPly, Obj };

/// Loads a PLY (ascii or binary little-endian) or OBJ triangle mesh.
/// Polygons with more than three vertices are fan-triangulated. Degenerate
/// faces are dropped; the count is reported through `dropped_faces` when
/// non-null. Stored normals are read past and discarded.
TriangleMesh load_mesh(const std::filesystem::path& path, std::size_t* dropped_faces = nullptr);

/// Saves by extension (.ply / .obj); `ascii` selects ascii PLY output.
/// Binary PLY stores coordinates as float64 so a load round-trip is exact.
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, bool ascii = false);

/// Debug point-cloud export/import: vertex-only binary PLY.
void save_point_cloud(const std::vector<Vec3>& points, const std::filesystem::path& path);
std::vector<Vec3> load_point_cloud(const std::filesystem::path& path);

}  // namespace conflate
