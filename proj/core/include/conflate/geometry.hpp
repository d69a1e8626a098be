#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>

namespace conflate {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

/// Axis-aligned bounding box in world coordinates (meters).
struct Aabb {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::max());
    Vec3 max = Vec3::Constant(std::numeric_limits<double>::lowest());

    bool empty() const { return (min.array() > max.array()).any(); }

    void extend(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }

    void extend(const Aabb& other) {
        if (other.empty()) return;
        min = min.cwiseMin(other.min);
        max = max.cwiseMax(other.max);
    }

    Vec3 diagonal() const { return empty() ? Vec3::Zero() : Vec3(max - min); }
    Vec3 center() const { return 0.5 * (min + max); }

    Aabb padded(double d) const {
        Aabb out;
        out.min = min - Vec3::Constant(d);
        out.max = max + Vec3::Constant(d);
        return out;
    }

    bool contains(const Vec3& p) const {
        return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
    }

    /// Squared distance from a point to the box (0 inside).
    double squared_exterior_distance(const Vec3& p) const {
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            double v = p[a];
            if (v < min[a]) d2 += (min[a] - v) * (min[a] - v);
            if (v > max[a]) d2 += (v - max[a]) * (v - max[a]);
        }
        return d2;
    }
};

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

/// Closest point on triangle (a,b,c) to p, by barycentric region classification.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Exact point-to-triangle distance. The face-interior case is evaluated as a
/// plane distance, which is exact for points lying in the supporting plane.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Watertight-enough Moller-Trumbore intersection; reports hits on both
/// windings and inclusive barycentric edges. Returns t > 0 only.
bool ray_triangle_intersect(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                            const Vec3& c, double& t_out);

/// Separating-axis triangle vs. axis-aligned box overlap (closed box).
bool triangle_box_overlap(const Vec3& box_center, const Vec3& box_half, const Vec3& a,
                          const Vec3& b, const Vec3& c);

}  // namespace conflate
