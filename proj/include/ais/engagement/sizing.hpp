#pragma once

#include "ais/core/types.hpp"

namespace ais::engagement {

enum class GripMode { grab, pop };

/// Terminal-phase relative state used to size the virtual intercept sphere.
struct SizingScenario {
    double r0 = 0.5;          // m
    double v_r0 = 0.0;        // m/s, along the LOS
    double v_theta0 = 0.0;    // m/s, normal to the LOS
    double v_phi0 = 0.0;      // m/s, normal to the LOS
    double object_radius = 0.1; // m, ball or balloon
    GripMode mode = GripMode::grab;
};

/// Smallest virtual-sphere radius that keeps the point target inside the
/// collision cone:  r0 * sqrt((Vt^2+Vp^2) / (Vt^2+Vp^2+Vr^2)).
inline double min_equivalent_radius(const SizingScenario& s) {
    const double t2 = s.v_theta0 * s.v_theta0 + s.v_phi0 * s.v_phi0;
    const double total = t2 + s.v_r0 * s.v_r0;
    if (total <= 0.0)
        throw DegenerateError("min_equivalent_radius: zero relative speed");
    return s.r0 * std::sqrt(t2 / total);
}

struct GripperSize {
    double radius = 0.0;       // m
    bool nominal_contact = false; // pop mode where any touch suffices
};

/// Gripper radius from the required equivalent radius: grabbing adds the
/// ball radius, popping subtracts the balloon radius (nominal contact pops).
inline GripperSize gripper_radius(double r_eq, double object_radius, GripMode mode) {
    if (r_eq < 0.0 || object_radius <= 0.0)
        throw Error("gripper_radius: non-positive input");
    GripperSize out;
    if (mode == GripMode::grab) {
        out.radius = r_eq + object_radius;
    } else if (r_eq > object_radius) {
        out.radius = r_eq - object_radius;
    } else {
        out.radius = 0.0;
        out.nominal_contact = true;
    }
    return out;
}

// Design values chosen in the reference system, printed alongside computed
// minima by the sizing CLI.
inline constexpr double kDesignGrabGripperRadius = 0.200; // m
inline constexpr double kDesignPopGripperRadius = 0.100;  // m

}  // namespace ais::engagement
