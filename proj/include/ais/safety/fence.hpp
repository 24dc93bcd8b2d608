#pragma once

#include "ais/safety/quickhull.hpp"

namespace ais::safety {

struct FenceConfig {
    double activation = 5.0; // m
    double gain = 1.0;       // (m/s) per m of penetration into the band
    // the arena net covers sides and top; the ground is for takeoff and
    // landing, so faces pointing down are skipped by the repulsion
    bool ignore_floor = true;
};

struct FenceCommand {
    Vec3 velocity = Vec3::Zero(); // m/s, inward
    bool breach = false;
};

/// Closest point to p on the hull face (clamped to the face polygon).
Vec3 closest_point_on_face(const Vec3& p, const FenceHull& hull, const HullFace& face);

/// Sum of inward velocities from every face within the activation band,
/// each of magnitude gain * (activation - distance).  A position outside the
/// hull is flagged as a breach and pushed straight back toward the centroid
/// at the full activation speed.
FenceCommand fence_repulsion(const Vec3& p, const FenceHull& hull, const FenceConfig& cfg);

}  // namespace ais::safety
