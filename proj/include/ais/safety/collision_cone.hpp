#pragma once

#include <span>
#include <vector>

#include "ais/core/types.hpp"

namespace ais::safety {

/// Relative motion of a UAV pair resolved along and across the line of sight.
struct RelativeKinematics {
    double r0 = 0.0;      // m, separation
    double v_r0 = 0.0;    // m/s, range rate (negative = closing)
    double v_theta0 = 0.0; // m/s, transverse
    double v_phi0 = 0.0;   // m/s, transverse
    Vec3 los = Vec3::Zero(); // unit, from self toward the other UAV

    double transverse_sq() const { return v_theta0 * v_theta0 + v_phi0 * v_phi0; }
};

/// Decompose the relative state of (self, other).  Throws on coincident
/// positions.
RelativeKinematics relative_kinematics(const VehicleState& self, const VehicleState& other);

/// Collision-cone membership: r0^2 (Vt^2 + Vp^2) <= R^2 (Vt^2 + Vp^2 + Vr^2)
/// with V_r0 < 0.
inline bool in_collision_cone(const RelativeKinematics& k, double safe_radius) {
    if (k.v_r0 >= 0.0) return false;
    const double t2 = k.transverse_sq();
    return k.r0 * k.r0 * t2 <= safe_radius * safe_radius * (t2 + k.v_r0 * k.v_r0);
}

enum class Priority { lower, equal, higher };

struct AvoidanceConfig {
    double safe_radius = 3.0;     // m
    double activation = 10.0;     // m
    double gain = 2.0;            // k_avoid
    // floor on the speed scale: a pure |V_r0| scale fades as braking works
    // and lets the mission command push a symmetric pair through each other
    double min_speed_scale = 2.0; // m/s
    // trigger on an inflated sphere so the realized miss clears safe_radius
    double cone_buffer = 1.0;     // m
};

/// Acceleration away from the other UAV along the LOS, scaled by closing
/// speed (floored) and proximity.  Zero for the higher-priority UAV of a
/// pair and outside the cone or activation distance.
Vec3 avoidance_accel(const RelativeKinematics& k, Priority self_priority,
                     const AvoidanceConfig& cfg);

/// Batch cone check over flat sample arrays (r0, vr, vtheta, vphi per
/// sample).  The serial variant is the reference; the parallel one uses
/// OpenMP when available and must produce identical output.
void cone_flags_serial(std::span<const double> r0, std::span<const double> vr,
                       std::span<const double> vtheta, std::span<const double> vphi,
                       double safe_radius, std::span<char> out);
void cone_flags_parallel(std::span<const double> r0, std::span<const double> vr,
                         std::span<const double> vtheta, std::span<const double> vphi,
                         double safe_radius, std::span<char> out);

}  // namespace ais::safety
