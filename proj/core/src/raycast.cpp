#include "conflate/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace conflate {

namespace {

constexpr std::int32_t kLeafSize = 4;
constexpr int kMaxStack = 64;

// Slab test against the node box over (t0, t1); robust to zero components
// because IEEE infinities order correctly here.
inline bool ray_box_hit(const Vec3& origin, const Vec3& inv_dir, const Aabb& box, double t0,
                        double t1) {
    for (int a = 0; a < 3; ++a) {
        double lo = (box.min[a] - origin[a]) * inv_dir[a];
        double hi = (box.max[a] - origin[a]) * inv_dir[a];
        if (inv_dir[a] < 0.0) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

RayAccelerator::RayAccelerator(const TriangleMesh& mesh) {
    if (mesh.empty()) throw std::runtime_error("build_accelerator: empty mesh");

    const auto n = static_cast<std::int32_t>(mesh.faces.size());
    triangles_.resize(static_cast<std::size_t>(n));
    std::vector<Vec3> centroids(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i) {
        const auto& f = mesh.faces[static_cast<std::size_t>(i)];
        triangles_[static_cast<std::size_t>(i)] = {mesh.vertex(f[0]), mesh.vertex(f[1]),
                                                   mesh.vertex(f[2])};
        centroids[static_cast<std::size_t>(i)] =
            (mesh.vertex(f[0]) + mesh.vertex(f[1]) + mesh.vertex(f[2])) / 3.0;
    }

    order_.resize(static_cast<std::size_t>(n));
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(static_cast<std::size_t>(2 * n));
    build_node(order_.data(), n, centroids);
}

std::int32_t RayAccelerator::build_node(std::int32_t* ids, std::int32_t count,
                                        const std::vector<Vec3>& centroids) {
    const auto node_id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();

    Aabb box;
    for (std::int32_t i = 0; i < count; ++i) {
        const Triangle& t = triangles_[static_cast<std::size_t>(ids[i])];
        box.extend(t.a);
        box.extend(t.b);
        box.extend(t.c);
    }
    nodes_[static_cast<std::size_t>(node_id)].box = box;

    if (count <= kLeafSize) {
        nodes_[static_cast<std::size_t>(node_id)].first =
            static_cast<std::int32_t>(ids - order_.data());
        nodes_[static_cast<std::size_t>(node_id)].count = count;
        return node_id;
    }

    Aabb centroid_box;
    for (std::int32_t i = 0; i < count; ++i) {
        centroid_box.extend(centroids[static_cast<std::size_t>(ids[i])]);
    }
    int axis = 0;
    const Vec3 span = centroid_box.diagonal();
    if (span.y() > span.x()) axis = 1;
    if (span.z() > span[axis]) axis = 2;

    const std::int32_t mid = count / 2;
    std::nth_element(ids, ids + mid, ids + count, [&](std::int32_t lhs, std::int32_t rhs) {
        const double a = centroids[static_cast<std::size_t>(lhs)][axis];
        const double b = centroids[static_cast<std::size_t>(rhs)][axis];
        return a < b || (a == b && lhs < rhs);
    });

    const std::int32_t left = build_node(ids, mid, centroids);
    const std::int32_t right = build_node(ids + mid, count - mid, centroids);
    nodes_[static_cast<std::size_t>(node_id)].left = left;
    nodes_[static_cast<std::size_t>(node_id)].right = right;
    return node_id;
}

std::optional<RayHit> RayAccelerator::hit_after(const Ray& ray, double t_min) const {
    const Vec3 inv_dir = ray.dir.cwiseInverse();
    double best_t = std::numeric_limits<double>::infinity();
    std::int32_t best_tri = -1;

    std::int32_t stack[kMaxStack];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
        if (!ray_box_hit(ray.origin, inv_dir, node.box, t_min, best_t)) continue;
        if (node.count > 0) {
            for (std::int32_t i = 0; i < node.count; ++i) {
                const std::int32_t tri = order_[static_cast<std::size_t>(node.first + i)];
                const Triangle& tv = triangles_[static_cast<std::size_t>(tri)];
                double t;
                if (!ray_triangle_intersect(ray.origin, ray.dir, tv.a, tv.b, tv.c, t)) continue;
                if (t <= t_min) continue;
                if (t < best_t || (t == best_t && tri < best_tri)) {
                    best_t = t;
                    best_tri = tri;
                }
            }
        } else {
            // Near child last so it pops first.
            stack[top++] = node.right;
            stack[top++] = node.left;
        }
    }
    if (best_tri < 0) return std::nullopt;
    return RayHit{best_t, best_tri, -1};
}

std::optional<RayHit> RayAccelerator::first_hit(const Ray& ray) const {
    return hit_after(ray, kRayTMin);
}

std::optional<RayHit> RayAccelerator::next_hit_after(const Ray& ray, double t_prev,
                                                     double eps_skip) const {
    return hit_after(ray, t_prev + eps_skip);
}

ClosestPoint RayAccelerator::closest_point(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    std::int32_t best_tri = -1;

    std::int32_t stack[kMaxStack];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
        if (node.box.squared_exterior_distance(p) >= best * best) continue;
        if (node.count > 0) {
            for (std::int32_t i = 0; i < node.count; ++i) {
                const std::int32_t tri = order_[static_cast<std::size_t>(node.first + i)];
                const Triangle& tv = triangles_[static_cast<std::size_t>(tri)];
                const double d = point_triangle_distance(p, tv.a, tv.b, tv.c);
                if (d < best || (d == best && tri < best_tri)) {
                    best = d;
                    best_tri = tri;
                }
            }
        } else {
            const double dl =
                nodes_[static_cast<std::size_t>(node.left)].box.squared_exterior_distance(p);
            const double dr =
                nodes_[static_cast<std::size_t>(node.right)].box.squared_exterior_distance(p);
            // Near child last so it pops first.
            if (dl <= dr) {
                stack[top++] = node.right;
                stack[top++] = node.left;
            } else {
                stack[top++] = node.left;
                stack[top++] = node.right;
            }
        }
    }

    ClosestPoint out;
    out.distance = best;
    out.triangle = best_tri;
    if (best_tri >= 0) {
        const Triangle& tv = triangles_[static_cast<std::size_t>(best_tri)];
        out.point = closest_point_on_triangle(p, tv.a, tv.b, tv.c);
    }
    return out;
}

RayAccelerator build_accelerator(const TriangleMesh& mesh) { return RayAccelerator(mesh); }

DepthSampleBatch render_depth(const RayAccelerator& acc, const VirtualCamera& camera,
                              const DirectionSet& dirs, std::int32_t camera_id,
                              std::int32_t source_id, double eps_skip) {
    DepthSampleBatch batch;
    batch.camera = camera_id;
    batch.source = source_id;
    for (std::size_t i = 0; i < dirs.directions.size(); ++i) {
        const Ray ray{camera.center, dirs.directions[i]};
        const auto hit = acc.first_hit(ray);
        if (!hit) continue;
        const auto next = acc.next_hit_after(ray, hit->t, eps_skip);
        batch.samples.push_back(
            {static_cast<std::int32_t>(i), hit->t, next ? next->t : -1.0});
    }
    return batch;
}

}  // namespace conflate
