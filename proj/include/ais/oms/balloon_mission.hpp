#pragma once

#include <optional>
#include <span>

#include "ais/guidance/guidance.hpp"
#include "ais/oms/exploration.hpp"

namespace ais::oms {

enum class PopPhase { explore, approach, confirm, done };

struct PopperConfig {
    double v_approach = 2.0;     // m/s
    int empty_view_frames = 10;  // consecutive frames without a balloon
    int max_pops = 5;
    int max_rounds = 2;          // empty exploration rounds before giving up
    double waypoint_tol = 1.5;   // m
    guidance::NavParams nav;
};

struct PopperState {
    PopPhase phase = PopPhase::explore;
    std::size_t waypoint_idx = 0;
    int rounds_completed = 0;
    int rounds_with_detection = 0;
    Vec3 registered_position = Vec3::Zero();
    Vec3 balloon_estimate = Vec3::Zero();
    int frames_without_balloon = 0;
    double prev_passage_dot = 0.0;
    bool passed_balloon = false;
    int pops_confirmed = 0;
    bool detected_this_round = false;
};

struct PopperOutput {
    guidance::GuidanceCommand command;
    bool pop_confirmed = false;  // a confirm pass just counted one
    bool balloon_detected = false; // explore -> approach transition this tick
    bool mission_done = false;
};

/// One tick of the balloon-popping flow: explore the lawn-mower grid, servo
/// onto a detected balloon, fly past it (dot-product sign test), return to
/// the registered position and count the pop when the view stays empty.
PopperOutput balloon_mission_step(PopperState& st, const VehicleState& state,
                                  const std::optional<PixelObservation>& balloon_obs,
                                  const std::optional<Vec3>& balloon_world,
                                  std::span<const Waypoint> waypoints,
                                  const PopperConfig& cfg, const CameraIntrinsics& cam,
                                  const CameraMount& mount, guidance::YawController& yaw,
                                  double dt);

}  // namespace ais::oms
