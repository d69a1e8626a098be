#pragma once

#include "conflate/camera_field.hpp"
#include "conflate/mesh.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace conflate {

struct Ray {
    Vec3 origin = Vec3::Zero();
    Vec3 dir = Vec3::UnitZ();  // unit length

    Vec3 at(double t) const { return origin + t * dir; }
};

struct RayHit {
    double t = 0.0;
    std::int32_t triangle = -1;
    std::int32_t source = -1;
};

struct ClosestPoint {
    double distance = 0.0;
    std::int32_t triangle = -1;
    Vec3 point = Vec3::Zero();
};

constexpr double kRayTMin = 1e-6;         // m, self-intersection guard for first hits
constexpr double kDefaultEpsSkip = 1e-4;  // m, re-hit guard for next-hit queries

/// Bounding-volume hierarchy over one mesh's triangles. Immutable after
/// construction; queries are pure and safe to run concurrently. Hits are
/// orientation-agnostic: both windings intersect, and ties at identical t are
/// broken toward the smallest triangle id so shared-edge crossings resolve to
/// a single owner.
class RayAccelerator {
public:
    explicit RayAccelerator(const TriangleMesh& mesh);

    /// Nearest intersection with t > kRayTMin.
    std::optional<RayHit> first_hit(const Ray& ray) const;

    /// Nearest intersection with t > t_prev + eps_skip.
    std::optional<RayHit> next_hit_after(const Ray& ray, double t_prev,
                                         double eps_skip = kDefaultEpsSkip) const;

    /// Exact closest surface point (point-to-triangle, not point-to-vertex).
    ClosestPoint closest_point(const Vec3& p) const;

    std::size_t triangle_count() const { return triangles_.size(); }
    const Aabb& bounds() const { return nodes_[0].box; }

private:
    struct Node {
        Aabb box;
        std::int32_t left = -1;    // internal: child node ids
        std::int32_t right = -1;
        std::int32_t first = 0;    // leaf: range into order_
        std::int32_t count = 0;    // > 0 marks a leaf
    };

    struct Triangle {
        Vec3 a, b, c;
    };

    std::optional<RayHit> hit_after(const Ray& ray, double t_min) const;
    std::int32_t build_node(std::int32_t* ids, std::int32_t count, const std::vector<Vec3>& centroids);

    std::vector<Node> nodes_;
    std::vector<std::int32_t> order_;
    std::vector<Triangle> triangles_;  // indexed by original triangle id
};

RayAccelerator build_accelerator(const TriangleMesh& mesh);

/// One camera's hit records for one source mesh. Misses are omitted; t_next
/// is negative when there is no second intersection.
struct DepthSample {
    std::int32_t direction = 0;
    double t_hit = 0.0;
    double t_next = -1.0;

    bool has_next() const { return t_next > 0.0; }
};

struct DepthSampleBatch {
    std::int32_t camera = -1;
    std::int32_t source = -1;
    std::vector<DepthSample> samples;
};

/// Casts every direction from the camera center; records first hits and, for
/// each, the following intersection along the same ray.
DepthSampleBatch render_depth(const RayAccelerator& acc, const VirtualCamera& camera,
                              const DirectionSet& dirs, std::int32_t camera_id = -1,
                              std::int32_t source_id = -1,
                              double eps_skip = kDefaultEpsSkip);

}  // namespace conflate
