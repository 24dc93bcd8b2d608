#pragma once

#include <optional>
#include <vector>

#include "ais/core/camera.hpp"
#include "ais/core/types.hpp"
#include "ais/vision/contour.hpp"

namespace ais::guidance {

struct TrackingParams {
    double d_track = 8.0;       // m, equilibrium distance
    double k_pot = 4.0;         // 1/s, potential gain
    double v_max_track = kMaxSpeedMps; // m/s
    double kp_yaw = 5.0;        // 1/s
    double kd_yaw = 0.5;
};

struct GrabParams {
    double v_target = 2.0;      // m/s, estimated target speed
    double v_excess = 0.5;      // m/s
    double kp_yaw = 2.5;
    double kd_yaw = 0.3;
};

struct GuidanceCommand {
    Vec3 v_des = Vec3::Zero();  // m/s, world frame
    double r_des = 0.0;         // rad/s
};

/// Yaw-pointing loop state: previous error for the derivative term and the
/// last command, held when the LOS has no horizontal projection.
class YawController {
  public:
    /// r_des = kp*e + kd*de/dt toward the LOS azimuth, error wrapped to
    /// (-pi, pi].
    double command(const Vec3& los_world, double yaw, double kp, double kd, double dt);

    void reset() { has_prev_ = false; last_cmd_ = 0.0; }
    double last_error() const { return e_prev_; }

  private:
    bool has_prev_ = false;
    double e_prev_ = 0.0;
    double last_cmd_ = 0.0;
};

/// Alg-1 potential tracking: speed from the clamped attractive-repulsive
/// potential about d_track, direction +/-LOS by which side of the
/// equilibrium the target is on.  Missing observation holds position.
GuidanceCommand track_command(const std::optional<PixelObservation>& obs,
                              const VehicleState& state, const TrackingParams& params,
                              const vision::BallSearchConfig& cfg,
                              const CameraIntrinsics& cam, const CameraMount& mount,
                              YawController& yaw, double dt);

/// Alg-2 pure pursuit: velocity of magnitude v_target + v_excess along the
/// LOS.  Depth never enters the velocity law.
GuidanceCommand grab_command(const std::optional<PixelObservation>& obs,
                             const VehicleState& state, const GrabParams& params,
                             const CameraIntrinsics& cam, const CameraMount& mount,
                             YawController& yaw, double dt);

/// Balloon interception: grab law against a stationary target
/// (v_target = 0, v_excess = v_approach).
GuidanceCommand balloon_command(const std::optional<PixelObservation>& obs,
                                const VehicleState& state, double v_approach,
                                const CameraIntrinsics& cam, const CameraMount& mount,
                                YawController& yaw, double dt);

/// Index of the balloon at the smallest estimated depth, -1 when empty.
int select_nearest_balloon(const std::vector<double>& estimated_depths);

struct NavParams {
    double cruise_speed = 3.0; // m/s
    double arrive_gain = 1.0;  // 1/s, slowdown near the point
    double kp_yaw = 2.5;
    double kd_yaw = 0.0;
};

/// Waypoint-style motion: velocity toward a world point with arrival
/// slowdown; yaw toward `heading` when given, else along the travel
/// direction.
GuidanceCommand goto_point(const VehicleState& state, const Vec3& target,
                           const NavParams& params, std::optional<double> heading,
                           YawController& yaw, double dt);

/// Clamp a command's speed to the platform cap.
GuidanceCommand clamp_speed(GuidanceCommand cmd, double cap = kMaxSpeedMps);

}  // namespace ais::guidance
