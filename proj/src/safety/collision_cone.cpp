#include "ais/safety/collision_cone.hpp"

namespace ais::safety {

RelativeKinematics relative_kinematics(const VehicleState& self, const VehicleState& other) {
    const Vec3 dp = other.position - self.position;
    const double r0 = dp.norm();
    if (r0 < 1e-9) throw DegenerateError("relative_kinematics: coincident positions");

    RelativeKinematics k;
    k.r0 = r0;
    k.los = dp / r0;

    const Vec3 v_rel = other.velocity - self.velocity;
    k.v_r0 = v_rel.dot(k.los);
    const Vec3 transverse = v_rel - k.v_r0 * k.los;

    // orthonormal transverse basis; any fixed choice satisfies the
    // Pythagorean split
    Vec3 t_hat = k.los.cross(Vec3::UnitZ());
    if (t_hat.norm() < 1e-9) t_hat = k.los.cross(Vec3::UnitX());
    t_hat.normalize();
    const Vec3 p_hat = k.los.cross(t_hat);
    k.v_theta0 = transverse.dot(t_hat);
    k.v_phi0 = transverse.dot(p_hat);
    return k;
}

Vec3 avoidance_accel(const RelativeKinematics& k, Priority self_priority,
                     const AvoidanceConfig& cfg) {
    if (self_priority == Priority::higher) return Vec3::Zero();
    if (k.r0 >= cfg.activation) return Vec3::Zero();

    Vec3 accel = Vec3::Zero();
    if (in_collision_cone(k, cfg.safe_radius + cfg.cone_buffer)) {
        const double speed_scale = std::max(std::abs(k.v_r0), cfg.min_speed_scale);
        accel -= cfg.gain * speed_scale * (cfg.activation - k.r0) / cfg.activation * k.los;
    }

    // near-field bubble: continuous push inside 0.6x the activation range,
    // cone or not, so curving or crossing intruders cannot slip the gate
    const double near = 0.6 * cfg.activation;
    if (k.r0 < near)
        accel -= 2.5 * cfg.gain * cfg.min_speed_scale * (near - k.r0) / near * k.los;
    return accel;
}

namespace {

inline char cone_flag(double r0, double vr, double vt, double vp, double r) {
    if (vr >= 0.0) return 0;
    const double t2 = vt * vt + vp * vp;
    return r0 * r0 * t2 <= r * r * (t2 + vr * vr) ? 1 : 0;
}

}  // namespace

void cone_flags_serial(std::span<const double> r0, std::span<const double> vr,
                       std::span<const double> vtheta, std::span<const double> vphi,
                       double safe_radius, std::span<char> out) {
    const std::size_t n = r0.size();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = cone_flag(r0[i], vr[i], vtheta[i], vphi[i], safe_radius);
}

void cone_flags_parallel(std::span<const double> r0, std::span<const double> vr,
                         std::span<const double> vtheta, std::span<const double> vphi,
                         double safe_radius, std::span<char> out) {
    const std::int64_t n = static_cast<std::int64_t>(r0.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[i] = cone_flag(r0[i], vr[i], vtheta[i], vphi[i], safe_radius);
}

}  // namespace ais::safety
