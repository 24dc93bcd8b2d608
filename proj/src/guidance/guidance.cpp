#include "ais/guidance/guidance.hpp"

#include <algorithm>

namespace ais::guidance {

double YawController::command(const Vec3& los_world, double yaw, double kp, double kd,
                              double dt) {
    const double horiz = std::hypot(los_world.x(), los_world.y());
    if (horiz < 1e-9) return last_cmd_; // vertical LOS, hold previous command

    const double yaw_des = std::atan2(los_world.y(), los_world.x());
    const double e = wrap_angle(yaw_des - yaw);
    double de_dt = 0.0;
    if (has_prev_ && dt > 0.0) de_dt = wrap_angle(e - e_prev_) / dt;
    e_prev_ = e;
    has_prev_ = true;
    last_cmd_ = kp * e + kd * de_dt;
    return last_cmd_;
}

namespace {

struct LosFrames {
    Vec3 los_cam;
    Vec3 los_world;
};

LosFrames los_of(const PixelObservation& obs, const VehicleState& state,
                 const CameraIntrinsics& cam, const CameraMount& mount) {
    const Vec2 p = core::center_pixels(obs, cam);
    LosFrames f;
    f.los_cam = core::los_unit_vector(p.x(), p.y(), cam.f);
    f.los_world = core::camera_to_world(f.los_cam, mount.cam_to_body, state.body_to_world());
    return f;
}

}  // namespace

GuidanceCommand track_command(const std::optional<PixelObservation>& obs,
                              const VehicleState& state, const TrackingParams& params,
                              const vision::BallSearchConfig& cfg,
                              const CameraIntrinsics& cam, const CameraMount& mount,
                              YawController& yaw, double dt) {
    if (!obs) return {};

    const double d_target =
        core::depth_from_size(obs->apparent_radius, cfg.ball_radius, cam.f);
    const LosFrames los = los_of(*obs, state, cam, mount);

    const double v_track = std::clamp(params.k_pot * std::abs(d_target - params.d_track),
                                      0.0, params.v_max_track);
    const double sign = d_target >= params.d_track ? 1.0 : -1.0;

    GuidanceCommand cmd;
    cmd.v_des = sign * v_track * los.los_world;
    cmd.r_des = yaw.command(los.los_world, state.yaw, params.kp_yaw, params.kd_yaw, dt);
    return cmd;
}

GuidanceCommand grab_command(const std::optional<PixelObservation>& obs,
                             const VehicleState& state, const GrabParams& params,
                             const CameraIntrinsics& cam, const CameraMount& mount,
                             YawController& yaw, double dt) {
    if (!obs) return {};

    const LosFrames los = los_of(*obs, state, cam, mount);
    const double v_mag = params.v_target + params.v_excess;

    GuidanceCommand cmd;
    cmd.v_des = v_mag * los.los_world;
    cmd.r_des = yaw.command(los.los_world, state.yaw, params.kp_yaw, params.kd_yaw, dt);
    return cmd;
}

GuidanceCommand balloon_command(const std::optional<PixelObservation>& obs,
                                const VehicleState& state, double v_approach,
                                const CameraIntrinsics& cam, const CameraMount& mount,
                                YawController& yaw, double dt) {
    GrabParams p;
    p.v_target = 0.0;
    p.v_excess = v_approach;
    return grab_command(obs, state, p, cam, mount, yaw, dt);
}

int select_nearest_balloon(const std::vector<double>& estimated_depths) {
    if (estimated_depths.empty()) return -1;
    return static_cast<int>(std::min_element(estimated_depths.begin(),
                                             estimated_depths.end()) -
                            estimated_depths.begin());
}

GuidanceCommand goto_point(const VehicleState& state, const Vec3& target,
                           const NavParams& params, std::optional<double> heading,
                           YawController& yaw, double dt) {
    GuidanceCommand cmd;
    const Vec3 to_target = target - state.position;
    const double dist = to_target.norm();
    if (dist > 1e-6) {
        const double speed = std::min(params.cruise_speed, params.arrive_gain * dist);
        cmd.v_des = speed * to_target / dist;
    }
    Vec3 los = to_target;
    if (heading) los = Vec3(std::cos(*heading), std::sin(*heading), 0.0);
    cmd.r_des = yaw.command(los, state.yaw, params.kp_yaw, params.kd_yaw, dt);
    return cmd;
}

GuidanceCommand clamp_speed(GuidanceCommand cmd, double cap) {
    const double n = cmd.v_des.norm();
    if (n > cap) cmd.v_des *= cap / n;
    return cmd;
}

}  // namespace ais::guidance
