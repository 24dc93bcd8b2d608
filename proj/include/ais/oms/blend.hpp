#pragma once

#include <span>

#include "ais/guidance/guidance.hpp"

namespace ais::oms {

/// Combine the mission command with safety accelerations:
/// V_out = V_mission + sum(a) * dt, clamped to the platform cap.  Yaw rate
/// passes through.
inline guidance::GuidanceCommand blend_commands(const guidance::GuidanceCommand& mission,
                                                std::span<const Vec3> safety_accels,
                                                double dt) {
    guidance::GuidanceCommand out = mission;
    for (const auto& a : safety_accels) out.v_des += a * dt;
    return guidance::clamp_speed(out);
}

}  // namespace ais::oms
