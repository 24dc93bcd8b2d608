#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ais/control/sac.hpp"
#include "ais/core/camera.hpp"
#include "ais/core/types.hpp"
#include "ais/vision/contour.hpp"
#include "ais/vision/tracker.hpp"

namespace ais::simworld {

/// Figure-of-eight target: a Gerono lemniscate in an arbitrarily oriented
/// plane, traversed at constant path speed, with the ball suspended below.
struct TargetModel {
    Vec3 center = Vec3(0.0, 0.0, 10.0);
    double semi_axis_a = 10.0; // m
    double semi_axis_b = 5.0;  // m
    double yaw = 0.0, pitch = 0.0, roll = 0.0;
    double speed = 2.0;        // m/s along the path
    double rod_length = 1.45;  // m
    double ball_radius = 0.05; // m
    double start_param = 0.0;

    Vec3 point(double t) const;
    Vec3 tangent(double t) const; // unit, world frame
};

struct BalloonModel {
    Vec3 anchor = Vec3(0.0, 0.0, 1.5); // pole top
    double radius = 0.15;              // m
    double sway_amplitude = 0.2;       // m
    double sway_freq_hz = 0.25;
    double sway_phase = 0.0;           // rad
    double sway_direction = 0.0;       // rad, horizontal
    bool alive = true;

    Vec3 position(double time) const;
};

/// Velocity-command plant standing in for the autopilot.
struct PlantModel {
    double tau_v = 0.3;  // s
    double tau_r = 0.2;  // s
    double speed_cap = kMaxSpeedMps;
};

struct SensingConfig {
    double sigma_px = 2.0;
    double dropout_prob = 0.02;
    double max_range = 40.0; // m
};

struct WorldConfig {
    double dt = 0.02;
    bool has_target = true;
    TargetModel target;
    std::vector<BalloonModel> balloons;
    PlantModel plant;
    SensingConfig sensing;
    CameraIntrinsics camera;
    CameraMount mount = CameraMount::forward();
    double uav_span = 1.2;        // m, apparent box width of a UAV
    double uav_height = 0.35;     // m, apparent box height (wide, flat silhouette)
    double grab_eq_radius = 0.15; // m, gripper radius minus ball radius
    double pop_eq_radius = 0.25;  // m, popper radius plus balloon radius
    double detach_speed = 0.3;    // m/s closing speed needed to detach
};

struct UavInit {
    int id = 0;
    Vec3 position = Vec3::Zero();
    double yaw = 0.0;
};

struct ContactEvent {
    enum class Kind { grab_success, balloon_popped };
    Kind kind;
    int uav_id = 0;
    int balloon_index = -1;
    double t = 0.0;
    double payload_kg = 0.0;
};

/// What one UAV's camera sees this frame (synthetic stand-in for the
/// detection stack).
struct BallSighting {
    PixelObservation pixel;
    vision::ContourStats contour;
    bool rod_visible = false; // target UAV box in view, so l_r is meaningful
};

struct BalloonSighting {
    PixelObservation pixel;
    vision::ContourStats contour;
    int balloon_index = -1;
};

struct UavBoxSighting {
    int uav_id = 0; // or -1 for the target UAV
    vision::BoxDetection box;
};

struct SensorFrame {
    std::optional<BallSighting> ball;
    std::vector<BalloonSighting> balloons;
    std::vector<UavBoxSighting> uav_boxes;
};

class World {
  public:
    World(const WorldConfig& cfg, std::uint64_t seed, const std::vector<UavInit>& uavs);

    /// Advance one tick given per-UAV autopilot commands (indexed like uavs()).
    void step(const std::vector<control::AutopilotCommand>& commands);

    SensorFrame sense(int uav_index);

    std::vector<ContactEvent> take_contact_events();

    double time() const { return time_; }
    double dt() const { return cfg_.dt; }
    const WorldConfig& config() const { return cfg_; }

    const std::vector<VehicleState>& uavs() const { return uav_states_; }
    const std::vector<int>& uav_ids() const { return uav_ids_; }

    Vec3 target_position() const;
    Vec3 target_velocity() const;
    Vec3 ball_position() const { return ball_position_; }
    bool ball_attached() const { return ball_attached_to_ >= 0; }
    const std::vector<BalloonModel>& balloons() const { return cfg_.balloons; }
    int balloons_alive() const;

    Vec3 end_effector_position(int uav_index) const;

  private:
    void advance_target();
    void advance_ball();
    void check_contacts();

    WorldConfig cfg_;
    std::vector<int> uav_ids_;
    std::vector<VehicleState> uav_states_;
    std::vector<std::mt19937_64> sensor_rngs_; // one stream per UAV
    double time_ = 0.0;
    double path_param_ = 0.0;

    Vec2 ball_swing_ = Vec2::Zero();      // m, horizontal offset
    Vec2 ball_swing_rate_ = Vec2::Zero(); // m/s
    Vec3 ball_position_ = Vec3::Zero();
    Vec3 prev_target_velocity_ = Vec3::Zero();
    int ball_attached_to_ = -1;
    bool grab_reported_ = false;

    std::vector<ContactEvent> pending_events_;
};

}  // namespace ais::simworld
