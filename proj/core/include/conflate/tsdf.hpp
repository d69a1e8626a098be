#pragma once

#include "conflate/raycast.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace conflate {

/// Per-source conflation parameters: the fusion weight constant and the
/// truncation bandwidth, both encoding prior knowledge about that source's
/// resolution and accuracy.
struct SourceProfile {
    std::int32_t source = 0;
    double weight = 1.0;     // C_k, dimensionless, > 0
    double bandwidth = 0.0;  // m_k, meters, > 0
    std::string note;
};

/// Active truncation interval for one ray: [t_hit - m_pos, t_hit + m_neg].
struct RayBand {
    double t_hit = 0.0;
    double m_pos = 0.0;
    double m_neg = 0.0;
};

struct TsdfVoxel {
    double d = 0.0;  // weighted-average signed distance
    double w = 0.0;  // accumulated weight
};

/// Signed truncated distance along a ray: clamp(t_hit - t, -m, +m). Positive
/// before the surface, negative beyond it.
inline double truncated_distance(double t_hit, double t, double m) {
    return std::max(-m, std::min(m, t_hit - t));
}

/// Band-limited constant weight with an asymmetric band: c when
/// -m_neg <= t_hit - t <= m_pos (boundaries inclusive), else 0.
inline double ray_weight(double t_hit, double t, double m_pos, double m_neg, double c) {
    const double d = t_hit - t;
    return (d >= -m_neg && d <= m_pos) ? c : 0.0;
}

/// Symmetric band; the m_pos == m_neg special case of the above.
inline double ray_weight(double t_hit, double t, double m, double c) {
    return ray_weight(t_hit, t, m, m, c);
}

/// Negative-side bandwidth that never reaches past the midpoint toward the
/// next surface along the ray: m_k when unconstrained, else half the gap,
/// floored at one voxel so the zero crossing stays representable.
double adaptive_negative_band(double t_hit, std::optional<double> t_next, double m_k,
                              double voxel_size);

/// Sparse truncated signed distance volume. Voxels store weighted sums
/// (sum of w*d, sum of w) in 8^3 blocks, so contributions fold as a
/// commutative monoid and any integration order yields the same field.
/// Voxels never touched by a ray are absent, equivalent to W = 0.
class TsdfVolume {
public:
    TsdfVolume(double voxel_size, double max_bandwidth, const Vec3& origin = Vec3::Zero());

    double voxel_size() const { return voxel_size_; }
    double max_bandwidth() const { return max_bandwidth_; }
    const Vec3& origin() const { return origin_; }

    /// Folds one observation into a voxel (running weighted average).
    /// Contributions with w <= 0 are ignored.
    void add_sample(const Vec3i& voxel, double d, double w);

    std::optional<TsdfVoxel> at(const Vec3i& voxel) const;

    std::size_t stored_voxel_count() const { return stored_count_; }

    /// All stored voxel coordinates in ascending (x, y, z) block order;
    /// deterministic regardless of insertion order.
    std::vector<Vec3i> stored_voxels() const;

    Vec3i world_to_voxel(const Vec3& p) const {
        const Vec3 local = (p - origin_) / voxel_size_;
        return Vec3i(static_cast<int>(std::floor(local.x())),
                     static_cast<int>(std::floor(local.y())),
                     static_cast<int>(std::floor(local.z())));
    }

    Vec3 voxel_center(const Vec3i& v) const {
        return origin_ + voxel_size_ * (v.cast<double>() + Vec3::Constant(0.5));
    }

    static constexpr int kBlockBits = 3;
    static constexpr int kBlockSize = 1 << kBlockBits;  // 8
    static constexpr int kBlockMask = kBlockSize - 1;
    static constexpr int kBlockVoxels = kBlockSize * kBlockSize * kBlockSize;

    struct Block {
        std::array<double, kBlockVoxels> sum_wd{};
        std::array<double, kBlockVoxels> sum_w{};
    };

    /// Write handle that caches the last touched block, for tight
    /// integration loops. Invalidated by concurrent mutation.
    class Cursor {
    public:
        explicit Cursor(TsdfVolume& volume) : volume_(volume) {}
        void add(const Vec3i& voxel, double d, double w);

    private:
        TsdfVolume& volume_;
        std::uint64_t cached_key_ = ~0ull;
        Block* cached_block_ = nullptr;
    };

    static std::uint64_t block_key(const Vec3i& block_coord);
    static Vec3i block_coord_of(const Vec3i& voxel) {
        return Vec3i(voxel.x() >> kBlockBits, voxel.y() >> kBlockBits, voxel.z() >> kBlockBits);
    }
    static int block_slot(const Vec3i& voxel) {
        return ((voxel.x() & kBlockMask) << (2 * kBlockBits)) |
               ((voxel.y() & kBlockMask) << kBlockBits) | (voxel.z() & kBlockMask);
    }

    const std::unordered_map<std::uint64_t, std::unique_ptr<Block>>& blocks() const {
        return blocks_;
    }

private:
    friend class Cursor;
    Block& block_for(std::uint64_t key);

    double voxel_size_;
    double max_bandwidth_;
    Vec3 origin_;
    std::unordered_map<std::uint64_t, std::unique_ptr<Block>> blocks_;
    std::size_t stored_count_ = 0;
};

/// Decodes a block key back to the block coordinate.
Vec3i block_coord_from_key(std::uint64_t key);

/// Folds one ray's band into the volume. Voxels are visited by stepping the
/// ray at half-voxel increments over [t_hit - m_pos, t_hit + m_neg]
/// (deduplicated); each visited voxel is evaluated at its own center's ray
/// parameter t = (center - origin) . dir.
void integrate_ray(TsdfVolume& volume, const Ray& ray, const RayBand& band, double c);

/// Integrates every recorded ray of a batch with the source's weight and
/// bandwidth, deriving each ray's negative band from its next hit when
/// adaptive banding is on. Throws if the batch and profile disagree on the
/// source id.
void integrate_view(TsdfVolume& volume, const DepthSampleBatch& batch,
                    const SourceProfile& profile, const Vec3& camera_center,
                    const DirectionSet& dirs, bool adaptive = true);

}  // namespace conflate
