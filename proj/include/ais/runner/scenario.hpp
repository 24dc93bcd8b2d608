#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ais/control/sac.hpp"
#include "ais/guidance/guidance.hpp"
#include "ais/oms/allocator.hpp"
#include "ais/oms/balloon_mission.hpp"
#include "ais/oms/exploration.hpp"
#include "ais/safety/collision_cone.hpp"
#include "ais/safety/fence.hpp"
#include "ais/simworld/world.hpp"

namespace ais::runner {

struct UavSpec {
    int id = 0;
    oms::Role role = oms::Role::grabber;
    Vec3 start = Vec3::Zero();
    double start_yaw = 0.0;
    Vec3 standby = Vec3::Zero();
};

struct MissionParams {
    double grabber_altitude = 10.0; // m, sweep + takeoff target
    double popper_altitude = 4.0;   // clears parked UAVs by more than the safe radius
    double grid_spacing = 12.0;
    double explore_margin = 5.0;
    int lost_frames = 15;          // debounce before ball_lost / grab_failed
    int confirm_frames = 10;       // popper empty-view threshold
    double fit_window_s = 26.0;    // seconds of track history before fitting
    double fit_residual_max = 1.5; // m, accept threshold on noisy samples
    double standoff_offset = 10.0; // m, keeps the parked UAV clear of the lobes
};

struct ScenarioConfig {
    std::vector<Vec3> arena_boundary;
    simworld::WorldConfig world;
    std::vector<UavSpec> uavs;
    guidance::TrackingParams tracking;
    guidance::GrabParams grab;
    guidance::NavParams nav;
    control::SacGains sac;
    double sac_tau = 0.5;
    safety::AvoidanceConfig avoidance;
    safety::FenceConfig fence;
    MissionParams mission;
    oms::FaultConfig faults;
    double duration = 900.0;
    std::uint64_t seed = 1;
};

/// Nominal 3-UAV mission: two grabbers, one popper, 100x40x20 arena,
/// 2 m/s figure-of-eight target, five balloons.
ScenarioConfig default_scenario();

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

}  // namespace ais::runner
