#include "conflate/geometry.hpp"

namespace conflate {

// Ericson-style region classification.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;

    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return a + v * ab;
    }

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return a + w * ac;
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + w * (c - b);
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    return a + v * ab + w * ac;
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;

    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);

    const double vc = d1 * d4 - d3 * d2;
    const double vb = d5 * d2 - d1 * d6;
    const double va = d3 * d6 - d5 * d4;

    const bool interior = va > 0.0 && vb > 0.0 && vc > 0.0 && d1 > 0.0 && d2 > 0.0 && d3 < 0.0 &&
                          d6 < 0.0 && (d4 - d3) > 0.0 && (d5 - d6) > 0.0;
    if (interior) {
        // Plane distance; exact zero for points in the supporting plane.
        const Vec3 n = ab.cross(ac);
        const double nn = n.squaredNorm();
        if (nn > 0.0) {
            const double s = ap.dot(n);
            return std::abs(s) / std::sqrt(nn);
        }
    }
    return (p - closest_point_on_triangle(p, a, b, c)).norm();
}

bool ray_triangle_intersect(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                            const Vec3& c, double& t_out) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pv = dir.cross(e2);
    const double det = e1.dot(pv);
    // Near-parallel or degenerate: relative threshold avoids scale dependence.
    if (det * det <= 1e-28 * e1.squaredNorm() * e2.squaredNorm()) return false;

    const double inv = 1.0 / det;
    const Vec3 sv = origin - a;
    const double u = sv.dot(pv) * inv;
    if (!(u >= 0.0 && u <= 1.0)) return false;

    const Vec3 qv = sv.cross(e1);
    const double v = dir.dot(qv) * inv;
    if (!(v >= 0.0 && u + v <= 1.0)) return false;

    const double t = e2.dot(qv) * inv;
    if (!(t > 0.0) || !std::isfinite(t)) return false;
    t_out = t;
    return true;
}

namespace {

inline bool axis_separates(double p0, double p1, double p2, double r) {
    const double lo = std::min(p0, std::min(p1, p2));
    const double hi = std::max(p0, std::max(p1, p2));
    return lo > r || hi < -r;
}

}  // namespace

// Akenine-Moller separating axis test, box centered at origin after translation.
bool triangle_box_overlap(const Vec3& box_center, const Vec3& box_half, const Vec3& a,
                          const Vec3& b, const Vec3& c) {
    const Vec3 v0 = a - box_center;
    const Vec3 v1 = b - box_center;
    const Vec3 v2 = c - box_center;
    const Vec3& h = box_half;

    // 1. Box axes vs triangle AABB.
    for (int i = 0; i < 3; ++i) {
        if (axis_separates(v0[i], v1[i], v2[i], h[i])) return false;
    }

    const Vec3 e0 = v1 - v0;
    const Vec3 e1 = v2 - v1;
    const Vec3 e2 = v0 - v2;

    // 2. Nine cross-product axes e_i x box_axis_j.
    const Vec3 edges[3] = {e0, e1, e2};
    for (const Vec3& e : edges) {
        // axis = e x (1,0,0) = (0, e.z, -e.y)
        {
            const double p0 = e.z() * v0.y() - e.y() * v0.z();
            const double p1 = e.z() * v1.y() - e.y() * v1.z();
            const double p2 = e.z() * v2.y() - e.y() * v2.z();
            const double r = h.y() * std::abs(e.z()) + h.z() * std::abs(e.y());
            if (axis_separates(p0, p1, p2, r)) return false;
        }
        // axis = e x (0,1,0) = (-e.z, 0, e.x)
        {
            const double p0 = e.x() * v0.z() - e.z() * v0.x();
            const double p1 = e.x() * v1.z() - e.z() * v1.x();
            const double p2 = e.x() * v2.z() - e.z() * v2.x();
            const double r = h.x() * std::abs(e.z()) + h.z() * std::abs(e.x());
            if (axis_separates(p0, p1, p2, r)) return false;
        }
        // axis = e x (0,0,1) = (e.y, -e.x, 0)
        {
            const double p0 = e.y() * v0.x() - e.x() * v0.y();
            const double p1 = e.y() * v1.x() - e.x() * v1.y();
            const double p2 = e.y() * v2.x() - e.x() * v2.y();
            const double r = h.x() * std::abs(e.y()) + h.y() * std::abs(e.x());
            if (axis_separates(p0, p1, p2, r)) return false;
        }
    }

    // 3. Triangle plane vs box.
    const Vec3 n = e0.cross(e1);
    const double d = n.dot(v0);
    const double r = h.x() * std::abs(n.x()) + h.y() * std::abs(n.y()) + h.z() * std::abs(n.z());
    return std::abs(d) <= r;
}

}  // namespace conflate
