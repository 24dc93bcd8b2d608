#include "ais/safety/fence.hpp"

namespace ais::safety {

namespace {

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double den = ab.squaredNorm();
    if (den < 1e-18) return a;
    const double t = std::clamp((p - a).dot(ab) / den, 0.0, 1.0);
    return a + t * ab;
}

}  // namespace

Vec3 closest_point_on_face(const Vec3& p, const FenceHull& hull, const HullFace& face) {
    const Vec3 proj = p - (face.normal.dot(p) - face.offset) * face.normal;

    // inside test: the projection must be left of every boundary edge
    bool inside = true;
    const int n = static_cast<int>(face.vertices.size());
    for (int i = 0; i < n; ++i) {
        const Vec3& a = hull.vertices[face.vertices[i]];
        const Vec3& b = hull.vertices[face.vertices[(i + 1) % n]];
        if (((b - a).cross(proj - a)).dot(face.normal) < 0.0) {
            inside = false;
            break;
        }
    }
    if (inside) return proj;

    Vec3 best = hull.vertices[face.vertices[0]];
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const Vec3& a = hull.vertices[face.vertices[i]];
        const Vec3& b = hull.vertices[face.vertices[(i + 1) % n]];
        const Vec3 c = closest_point_on_segment(proj, a, b);
        const double d = (c - p).squaredNorm();
        if (d < best_d) { best_d = d; best = c; }
    }
    return best;
}

FenceCommand fence_repulsion(const Vec3& p, const FenceHull& hull, const FenceConfig& cfg) {
    FenceCommand cmd;
    if (!hull.contains(p, 1e-9)) {
        cmd.breach = true;
        Vec3 dir = hull.centroid() - p;
        const double n = dir.norm();
        if (n > 1e-12) dir /= n;
        cmd.velocity = cfg.gain * cfg.activation * dir;
        return cmd;
    }

    for (const auto& face : hull.faces) {
        if (cfg.ignore_floor && face.normal.z() < -0.866) continue;
        const double d = (closest_point_on_face(p, hull, face) - p).norm();
        if (d < cfg.activation)
            cmd.velocity += cfg.gain * (cfg.activation - d) * (-face.normal);
    }
    return cmd;
}

}  // namespace ais::safety
