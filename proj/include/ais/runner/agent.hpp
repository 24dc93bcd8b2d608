#pragma once

#include <deque>
#include <map>
#include <optional>

#include "ais/estimation/curve_fit.hpp"
#include "ais/estimation/target_ekf.hpp"
#include "ais/oms/allocator.hpp"
#include "ais/oms/balloon_mission.hpp"
#include "ais/oms/blend.hpp"
#include "ais/runner/scenario.hpp"

namespace ais::runner {

/// Slave-side executor: runs the active mission task, layers the always-on
/// safety behaviors on top, and reports status/events to the master.
class AgentExecutor {
  public:
    AgentExecutor(const UavSpec& spec, const ScenarioConfig& cfg,
                  const safety::FenceHull* hull);

    struct TickInput {
        double t = 0.0;
        simworld::SensorFrame frame;
        std::vector<oms::BusMessage> inbox;
        std::vector<simworld::ContactEvent> contacts;
        bool alive = true;
    };

    struct TickOutput {
        control::AutopilotCommand autopilot;
        std::vector<oms::BusMessage> outgoing;
        std::vector<std::string> events; // names, for telemetry
        bool fence_breach = false;
    };

    TickOutput tick(const VehicleState& self, const TickInput& in);

    int id() const { return spec_.id; }
    oms::Role role() const { return spec_.role; }
    oms::TaskKind active_task() const { return task_; }
    const std::optional<estimation::CurveFit>& fit() const { return fit_; }

  private:
    struct NeighborInfo {
        VehicleState state;
        int priority_rank = 0;
        double t = 0.0;
    };

    void switch_task(const oms::TaskDirective& d);
    int priority_rank() const;

    std::optional<PixelObservation> accept_ball(const simworld::SensorFrame& frame, double t);
    std::optional<Vec3> ball_world(const simworld::BallSighting& s,
                                   const VehicleState& self) const;
    vision::BallSearchConfig ball_search_config() const;

    guidance::GuidanceCommand run_task(const VehicleState& self, const TickInput& in,
                                       TickOutput& out);
    guidance::GuidanceCommand run_track(const VehicleState& self,
                                        const std::optional<PixelObservation>& obs,
                                        const std::optional<Vec3>& ball_pos, double t,
                                        TickOutput& out);
    guidance::GuidanceCommand run_popper(const VehicleState& self, const TickInput& in,
                                         TickOutput& out);

    void publish_event(TickOutput& out, oms::EventKind kind, double t,
                       double payload_kg = 0.0);
    void publish_status(TickOutput& out, oms::TaskStatus status, double t);

    UavSpec spec_;
    const ScenarioConfig& cfg_;
    const safety::FenceHull* hull_;

    oms::TaskKind task_ = oms::TaskKind::takeoff;
    std::optional<Vec3> position_hint_;
    std::optional<double> speed_hint_;
    bool status_done_sent_ = false;
    bool ball_detected_sent_ = false;
    bool grabbed_ = false;

    guidance::YawController yaw_;
    std::map<int, NeighborInfo> neighbors_;
    Vec3 safety_velocity_ = Vec3::Zero();
    control::ReferenceModel ref_model_;
    vision::TrackerRegistry box_tracker_;

    // ball tracking memory
    int ball_misses_ = 0;
    bool ball_seen_this_task_ = false;
    double task_start_t_ = -1.0;
    double last_ball_seen_t_ = -1.0;
    std::optional<Vec3> last_ball_world_;
    std::optional<Vec2> last_ball_pixel_;
    double last_ball_radius_px_ = 0.0;
    std::deque<std::pair<double, Vec3>> ball_history_; // (t, world position)
    std::optional<estimation::EkfState> ekf_;
    std::optional<estimation::CurveFit> fit_;
    double next_fit_attempt_ = 0.0;
    guidance::GuidanceCommand last_mission_cmd_;

    // popper memory
    oms::PopperState popper_;
    std::vector<oms::Waypoint> popper_waypoints_;
    std::vector<oms::Waypoint> sweep_waypoints_;
    std::size_t sweep_idx_ = 0;
};

}  // namespace ais::runner
