#include "ais/oms/balloon_mission.hpp"

namespace ais::oms {

namespace {

guidance::GuidanceCommand explore_step(PopperState& st, const VehicleState& state,
                                       std::span<const Waypoint> waypoints,
                                       const PopperConfig& cfg,
                                       guidance::YawController& yaw, double dt,
                                       bool* round_done) {
    *round_done = false;
    if (waypoints.empty()) return {};
    const Waypoint& wp = waypoints[st.waypoint_idx % waypoints.size()];
    if ((state.position - wp.position).norm() < cfg.waypoint_tol) {
        ++st.waypoint_idx;
        if (st.waypoint_idx % waypoints.size() == 0) *round_done = true;
    }
    const Waypoint& cur = waypoints[st.waypoint_idx % waypoints.size()];
    std::optional<double> heading;
    if (cur.heading_fixed) heading = cur.heading;
    return guidance::goto_point(state, cur.position, cfg.nav, heading, yaw, dt);
}

}  // namespace

PopperOutput balloon_mission_step(PopperState& st, const VehicleState& state,
                                  const std::optional<PixelObservation>& balloon_obs,
                                  const std::optional<Vec3>& balloon_world,
                                  std::span<const Waypoint> waypoints,
                                  const PopperConfig& cfg, const CameraIntrinsics& cam,
                                  const CameraMount& mount, guidance::YawController& yaw,
                                  double dt) {
    PopperOutput out;

    switch (st.phase) {
        case PopPhase::explore: {
            if (balloon_obs && balloon_world) {
                st.phase = PopPhase::approach;
                st.registered_position = state.position;
                st.balloon_estimate = *balloon_world;
                st.frames_without_balloon = 0;
                st.passed_balloon = false;
                st.prev_passage_dot = 0.0;
                st.detected_this_round = true;
                out.balloon_detected = true;
                out.command = guidance::balloon_command(balloon_obs, state, cfg.v_approach,
                                                        cam, mount, yaw, dt);
                break;
            }
            bool round_done = false;
            out.command = explore_step(st, state, waypoints, cfg, yaw, dt, &round_done);
            if (round_done) {
                ++st.rounds_completed;
                if (st.detected_this_round) ++st.rounds_with_detection;
                const int empty_rounds = st.rounds_completed - st.rounds_with_detection;
                st.detected_this_round = false;
                if (empty_rounds >= cfg.max_rounds) {
                    st.phase = PopPhase::done;
                    out.mission_done = true;
                }
            }
            break;
        }

        case PopPhase::approach: {
            if (balloon_obs) {
                st.frames_without_balloon = 0;
                if (balloon_world) st.balloon_estimate = *balloon_world;
                out.command = guidance::balloon_command(balloon_obs, state, cfg.v_approach,
                                                        cam, mount, yaw, dt);
            } else {
                ++st.frames_without_balloon;
                // keep pushing through the estimated balloon position
                Vec3 through = st.balloon_estimate;
                const Vec3 dir = st.balloon_estimate - st.registered_position;
                if (dir.norm() > 1e-6) through += 3.0 * dir.normalized();
                out.command =
                    guidance::goto_point(state, through, cfg.nav, std::nullopt, yaw, dt);
            }

            const double passage = (st.registered_position - state.position)
                                       .dot(st.balloon_estimate - state.position);
            if (st.prev_passage_dot < 0.0 && passage >= 0.0) st.passed_balloon = true;
            st.prev_passage_dot = passage;

            if (st.frames_without_balloon >= cfg.empty_view_frames && st.passed_balloon)
                st.phase = PopPhase::confirm;
            break;
        }

        case PopPhase::confirm: {
            // fly back facing the balloon spot so the check is meaningful
            const Vec3 look = st.balloon_estimate - st.registered_position;
            std::optional<double> heading;
            if (look.head<2>().norm() > 1e-6) heading = std::atan2(look.y(), look.x());
            out.command = guidance::goto_point(state, st.registered_position, cfg.nav,
                                               heading, yaw, dt);
            if ((state.position - st.registered_position).norm() < cfg.waypoint_tol) {
                if (balloon_obs) {
                    // still there: the attempt missed, go again
                    st.phase = PopPhase::approach;
                    st.registered_position = state.position;
                    if (balloon_world) st.balloon_estimate = *balloon_world;
                    st.frames_without_balloon = 0;
                    st.passed_balloon = false;
                    st.prev_passage_dot = 0.0;
                } else {
                    ++st.pops_confirmed;
                    out.pop_confirmed = true;
                    if (st.pops_confirmed >= cfg.max_pops) {
                        st.phase = PopPhase::done;
                        out.mission_done = true;
                    } else {
                        st.phase = PopPhase::explore;
                    }
                }
            }
            break;
        }

        case PopPhase::done:
            out.mission_done = true;
            break;
    }
    return out;
}

}  // namespace ais::oms
