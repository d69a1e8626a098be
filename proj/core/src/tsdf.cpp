#include "conflate/tsdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conflate {

namespace {

constexpr std::int64_t kCoordBias = 1 << 20;

}  // namespace

double adaptive_negative_band(double t_hit, std::optional<double> t_next, double m_k,
                              double voxel_size) {
    if (!t_next) return m_k;
    const double gap = *t_next - t_hit;
    if (gap >= 2.0 * m_k) return m_k;
    return std::min(m_k, std::max(voxel_size, 0.5 * gap));
}

TsdfVolume::TsdfVolume(double voxel_size, double max_bandwidth, const Vec3& origin)
    : voxel_size_(voxel_size), max_bandwidth_(max_bandwidth), origin_(origin) {
    if (!(voxel_size > 0.0)) throw std::runtime_error("TsdfVolume: voxel_size must be > 0");
    if (!(max_bandwidth >= voxel_size)) {
        throw std::runtime_error("TsdfVolume: max_bandwidth must be >= voxel_size");
    }
}

std::uint64_t TsdfVolume::block_key(const Vec3i& block_coord) {
    const auto x = static_cast<std::uint64_t>(block_coord.x() + kCoordBias);
    const auto y = static_cast<std::uint64_t>(block_coord.y() + kCoordBias);
    const auto z = static_cast<std::uint64_t>(block_coord.z() + kCoordBias);
    return (x << 42) | (y << 21) | z;
}

Vec3i block_coord_from_key(std::uint64_t key) {
    const auto mask = (1ull << 21) - 1;
    return Vec3i(static_cast<int>((key >> 42) & mask) - kCoordBias,
                 static_cast<int>((key >> 21) & mask) - kCoordBias,
                 static_cast<int>(key & mask) - kCoordBias);
}

TsdfVolume::Block& TsdfVolume::block_for(std::uint64_t key) {
    auto& slot = blocks_[key];
    if (!slot) slot = std::make_unique<Block>();
    return *slot;
}

void TsdfVolume::add_sample(const Vec3i& voxel, double d, double w) {
    if (!(w > 0.0)) return;
    Block& block = block_for(block_key(block_coord_of(voxel)));
    const int slot = block_slot(voxel);
    if (block.sum_w[static_cast<std::size_t>(slot)] == 0.0) ++stored_count_;
    block.sum_wd[static_cast<std::size_t>(slot)] += w * d;
    block.sum_w[static_cast<std::size_t>(slot)] += w;
}

void TsdfVolume::Cursor::add(const Vec3i& voxel, double d, double w) {
    if (!(w > 0.0)) return;
    const std::uint64_t key = block_key(block_coord_of(voxel));
    if (key != cached_key_) {
        cached_block_ = &volume_.block_for(key);
        cached_key_ = key;
    }
    const int slot = block_slot(voxel);
    if (cached_block_->sum_w[static_cast<std::size_t>(slot)] == 0.0) ++volume_.stored_count_;
    cached_block_->sum_wd[static_cast<std::size_t>(slot)] += w * d;
    cached_block_->sum_w[static_cast<std::size_t>(slot)] += w;
}

std::optional<TsdfVoxel> TsdfVolume::at(const Vec3i& voxel) const {
    const auto it = blocks_.find(block_key(block_coord_of(voxel)));
    if (it == blocks_.end()) return std::nullopt;
    const int slot = block_slot(voxel);
    const double w = it->second->sum_w[static_cast<std::size_t>(slot)];
    if (w == 0.0) return std::nullopt;
    return TsdfVoxel{it->second->sum_wd[static_cast<std::size_t>(slot)] / w, w};
}

std::vector<Vec3i> TsdfVolume::stored_voxels() const {
    std::vector<std::uint64_t> keys;
    keys.reserve(blocks_.size());
    for (const auto& [key, block] : blocks_) keys.push_back(key);
    std::sort(keys.begin(), keys.end());

    std::vector<Vec3i> voxels;
    voxels.reserve(stored_count_);
    for (const std::uint64_t key : keys) {
        const Vec3i base = block_coord_from_key(key) * kBlockSize;
        const Block& block = *blocks_.at(key);
        for (int x = 0; x < kBlockSize; ++x) {
            for (int y = 0; y < kBlockSize; ++y) {
                for (int z = 0; z < kBlockSize; ++z) {
                    const int slot = (x << (2 * kBlockBits)) | (y << kBlockBits) | z;
                    if (block.sum_w[static_cast<std::size_t>(slot)] != 0.0) {
                        voxels.emplace_back(base.x() + x, base.y() + y, base.z() + z);
                    }
                }
            }
        }
    }
    return voxels;
}

void integrate_ray(TsdfVolume& volume, const Ray& ray, const RayBand& band, double c) {
    if (!(c > 0.0)) return;
    const double step = 0.5 * volume.voxel_size();
    const double t_begin = std::max(band.t_hit - band.m_pos, kRayTMin);
    const double t_end = band.t_hit + band.m_neg;
    if (t_end < t_begin) return;

    TsdfVolume::Cursor cursor(volume);
    Vec3i previous(INT32_MIN, INT32_MIN, INT32_MIN);
    for (double t = t_begin;; t += step) {
        const bool last = t >= t_end;
        const double ts = last ? t_end : t;
        const Vec3i voxel = volume.world_to_voxel(ray.at(ts));
        if (voxel != previous) {
            previous = voxel;
            const double t_center = (volume.voxel_center(voxel) - ray.origin).dot(ray.dir);
            const double w = ray_weight(band.t_hit, t_center, band.m_pos, band.m_neg, c);
            if (w > 0.0) {
                cursor.add(voxel, truncated_distance(band.t_hit, t_center, band.m_pos), w);
            }
        }
        if (last) break;
    }
}

void integrate_view(TsdfVolume& volume, const DepthSampleBatch& batch,
                    const SourceProfile& profile, const Vec3& camera_center,
                    const DirectionSet& dirs, bool adaptive) {
    if (batch.source != profile.source) {
        throw std::runtime_error("integrate_view: batch source " + std::to_string(batch.source) +
                                 " does not match profile source " +
                                 std::to_string(profile.source));
    }
    for (const DepthSample& sample : batch.samples) {
        double m_neg = profile.bandwidth;
        if (adaptive) {
            std::optional<double> t_next;
            if (sample.has_next()) t_next = sample.t_next;
            m_neg = adaptive_negative_band(sample.t_hit, t_next, profile.bandwidth,
                                           volume.voxel_size());
        }
        const RayBand band{sample.t_hit, profile.bandwidth, m_neg};
        const Ray ray{camera_center, dirs.directions[static_cast<std::size_t>(sample.direction)]};
        integrate_ray(volume, ray, band, profile.weight);
    }
}

}  // namespace conflate
