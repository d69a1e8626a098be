#include "conflate/extract.hpp"

#include "conflate/mc_tables.hpp"

#include <algorithm>
#include <unordered_map>

namespace conflate {

namespace {

// Cube corner offsets; corner i of the cell based at voxel v is v + kShift[i].
constexpr int kShift[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

// Edge i starts at corner voxel v + offset and runs along +axis.
constexpr int kEdgeShift[12][4] = {
    {0, 0, 0, 0}, {1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 0, 1},
    {0, 0, 1, 0}, {1, 0, 1, 1}, {0, 1, 1, 0}, {0, 0, 1, 1},
    {0, 0, 0, 2}, {1, 0, 0, 2}, {1, 1, 0, 2}, {0, 1, 0, 2},
};

// Endpoints of edge i as corner indices; first entry is the edge base.
constexpr int kEdgeToVert[12][2] = {
    {0, 1}, {1, 2}, {3, 2}, {0, 3}, {4, 5}, {5, 6},
    {7, 6}, {4, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

constexpr std::int64_t kEdgeBias = 1 << 19;

std::uint64_t edge_key(const Vec3i& corner, int axis) {
    const auto x = static_cast<std::uint64_t>(corner.x() + kEdgeBias);
    const auto y = static_cast<std::uint64_t>(corner.y() + kEdgeBias);
    const auto z = static_cast<std::uint64_t>(corner.z() + kEdgeBias);
    return (((x << 20) | y) << 20 | z) << 2 | static_cast<std::uint64_t>(axis);
}

}  // namespace

TriangleMesh marching_cubes(const TsdfVolume& volume) {
    using Block = TsdfVolume::Block;
    constexpr int B = TsdfVolume::kBlockSize;

    std::vector<std::uint64_t> keys;
    keys.reserve(volume.blocks().size());
    for (const auto& [key, block] : volume.blocks()) keys.push_back(key);
    std::sort(keys.begin(), keys.end());

    TriangleMesh mesh;
    std::unordered_map<std::uint64_t, int> weld;

    for (const std::uint64_t key : keys) {
        const Vec3i block_coord = block_coord_from_key(key);
        // Pointers to this block and its +1 neighbors; corner reads resolve
        // into one of these by index arithmetic.
        const Block* nbr[2][2][2] = {};
        for (int ox = 0; ox < 2; ++ox) {
            for (int oy = 0; oy < 2; ++oy) {
                for (int oz = 0; oz < 2; ++oz) {
                    const auto it = volume.blocks().find(
                        TsdfVolume::block_key(block_coord + Vec3i(ox, oy, oz)));
                    if (it != volume.blocks().end()) nbr[ox][oy][oz] = it->second.get();
                }
            }
        }

        const Vec3i base_voxel = block_coord * B;
        for (int x = 0; x < B; ++x) {
            for (int y = 0; y < B; ++y) {
                for (int z = 0; z < B; ++z) {
                    double d[8];
                    bool complete = true;
                    for (int s = 0; s < 8 && complete; ++s) {
                        const int cx = x + kShift[s][0];
                        const int cy = y + kShift[s][1];
                        const int cz = z + kShift[s][2];
                        const Block* block = nbr[cx >> TsdfVolume::kBlockBits]
                                                [cy >> TsdfVolume::kBlockBits]
                                                [cz >> TsdfVolume::kBlockBits];
                        if (!block) {
                            complete = false;
                            break;
                        }
                        const int slot = ((cx & TsdfVolume::kBlockMask) << (2 * TsdfVolume::kBlockBits)) |
                                         ((cy & TsdfVolume::kBlockMask) << TsdfVolume::kBlockBits) |
                                         (cz & TsdfVolume::kBlockMask);
                        const double w = block->sum_w[static_cast<std::size_t>(slot)];
                        if (w == 0.0) {
                            complete = false;
                            break;
                        }
                        d[s] = block->sum_wd[static_cast<std::size_t>(slot)] / w;
                    }
                    if (!complete) continue;

                    int cube_index = 0;
                    for (int s = 0; s < 8; ++s) {
                        if (d[s] < 0.0) cube_index |= 1 << s;  // exact zero counts as outside
                    }
                    if (cube_index == 0 || cube_index == 255) continue;

                    const Vec3i cell(base_voxel.x() + x, base_voxel.y() + y, base_voxel.z() + z);
                    int edge_vertex[12];
                    const int edges = kMcEdgeTable[cube_index];
                    for (int e = 0; e < 12; ++e) {
                        if (!(edges & (1 << e))) continue;
                        const Vec3i corner(cell.x() + kEdgeShift[e][0],
                                           cell.y() + kEdgeShift[e][1],
                                           cell.z() + kEdgeShift[e][2]);
                        const int axis = kEdgeShift[e][3];
                        const std::uint64_t ek = edge_key(corner, axis);
                        const auto found = weld.find(ek);
                        if (found != weld.end()) {
                            edge_vertex[e] = found->second;
                            continue;
                        }
                        const double d0 = d[kEdgeToVert[e][0]];
                        const double d1 = d[kEdgeToVert[e][1]];
                        const double frac = d0 / (d0 - d1);
                        Vec3 pos = volume.voxel_center(corner);
                        pos[axis] += frac * volume.voxel_size();
                        const int id = static_cast<int>(mesh.vertices.size());
                        mesh.vertices.push_back(pos);
                        weld.emplace(ek, id);
                        edge_vertex[e] = id;
                    }

                    const int* tri = kMcTriTable[cube_index];
                    for (int i = 0; tri[i] != -1; i += 3) {
                        const int a = edge_vertex[tri[i]];
                        const int b = edge_vertex[tri[i + 1]];
                        const int c = edge_vertex[tri[i + 2]];
                        if (a == b || b == c || a == c) continue;
                        if (triangle_area(mesh.vertices[static_cast<std::size_t>(a)],
                                          mesh.vertices[static_cast<std::size_t>(b)],
                                          mesh.vertices[static_cast<std::size_t>(c)]) <=
                            kDegenerateAreaThreshold) {
                            continue;
                        }
                        mesh.faces.push_back({a, b, c});
                    }
                }
            }
        }
    }
    return mesh;
}

}  // namespace conflate
