#pragma once

#include "ais/core/types.hpp"
#include "ais/guidance/guidance.hpp"

namespace ais::control {

/// Per-axis blend gains (same value applied to x, y, z and yaw rate).
struct SacGains {
    double k_e = 0.4;
    double k_x = 0.2;
    double k_u = 0.8;
};

/// First-order reference models, one per velocity axis plus yaw rate.
/// Advanced with the exact discretization of vdot = (cmd - v)/tau.
struct ReferenceModel {
    double tau = 0.5;              // s
    Vec3 v_ref = Vec3::Zero();     // m/s
    double r_ref = 0.0;            // rad/s

    void step(const Vec3& v_cmd, double r_cmd, double dt) {
        const double a = std::exp(-dt / tau);
        v_ref = v_cmd + (v_ref - v_cmd) * a;
        r_ref = r_cmd + (r_ref - r_cmd) * a;
    }
};

struct AutopilotCommand {
    Vec3 v_d = Vec3::Zero(); // m/s
    double r_d = 0.0;        // rad/s
};

/// One controller tick: advance the reference models, form e = V_r - V, and
/// blend  V_d = k_e e + k_x V_r + k_u V_des  per axis (same for yaw rate).
inline AutopilotCommand sac_step(const guidance::GuidanceCommand& cmd,
                                 const VehicleState& actual, ReferenceModel& ref,
                                 const SacGains& g, double dt) {
    ref.step(cmd.v_des, cmd.r_des, dt);
    const Vec3 e_v = ref.v_ref - actual.velocity;
    const double e_r = ref.r_ref - actual.yaw_rate;

    AutopilotCommand out;
    out.v_d = g.k_e * e_v + g.k_x * ref.v_ref + g.k_u * cmd.v_des;
    out.r_d = g.k_e * e_r + g.k_x * ref.r_ref + g.k_u * cmd.r_des;
    return out;
}

}  // namespace ais::control
