#pragma once

#include "conflate/mesh.hpp"
#include "conflate/tsdf.hpp"

namespace conflate {

/// Standard 256-case marching cubes over the truncated band. Only cells with
/// all eight corners observed (W > 0) produce geometry, which keeps the
/// truncation boundary from spawning artifacts. Vertices are welded by exact
/// lattice-edge key, so the output is deterministic and watertight across
/// cell borders. A corner distance of exactly zero counts as outside.
/// An empty volume (or one with no sign change) yields an empty mesh.
TriangleMesh marching_cubes(const TsdfVolume& volume);

}  // namespace conflate
