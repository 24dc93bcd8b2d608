#pragma once

#include <map>
#include <string>
#include <vector>

#include "ais/oms/bus.hpp"
#include "ais/oms/task.hpp"

namespace ais::oms {

enum class Role { grabber, popper };

struct AgentConfig {
    int id = 0;
    Role role = Role::grabber;
    Vec3 standby_position = Vec3::Zero();
};

/// Master-side task allocation: one mission task per live agent, reassigned
/// on mission events and completed-task reports.  Safety behaviors run on
/// every agent continuously and never occupy the mission slot.
class Allocator {
  public:
    Allocator(int master_id, std::vector<AgentConfig> agents);

    /// Process the master inbox; returns directives to publish.
    std::vector<BusMessage> tick(double t, const std::vector<BusMessage>& inbox);

    const std::vector<TaskSwitch>& switches() const { return switches_; }
    const std::vector<Task>& registry() const { return registry_; }
    TaskKind active_task(int agent_id) const;
    bool mission_aborted() const { return aborted_; }

    /// Reset support: persist counters and task statuses ("pause").
    std::string snapshot_json() const;
    void restore_snapshot(const std::string& json_text);

  private:
    struct AgentState {
        AgentConfig cfg;
        bool alive = true;
        TaskKind active = TaskKind::takeoff;
        int active_task_id = -1;
        bool ball_visible = false;
        int pops = 0;
    };

    void assign(AgentState& agent, TaskKind kind, TaskClass cls, double t,
                const std::string& trigger);
    void handle_event(const MissionEvent& ev, double t);
    void handle_status(int sender, const StatusReport& report, double t);
    AgentState* find(int id);
    AgentState* partner_grabber(int id);
    void push_directive(const AgentState& agent, double t);

    int master_id_;
    std::vector<AgentState> agents_;
    std::vector<Task> registry_;
    std::vector<TaskSwitch> switches_;
    std::vector<BusMessage> out_;
    int next_task_id_ = 1;
    bool tracking_complete_ = false;
    bool ball_grabbed_ = false;
    bool aborted_ = false;
    std::optional<Vec3> standoff_;
    std::optional<Vec3> target_center_;
    std::optional<double> target_speed_;
    double now_ = 0.0;
};

}  // namespace ais::oms
