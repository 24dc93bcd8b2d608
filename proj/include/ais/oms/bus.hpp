#pragma once

#include <deque>
#include <map>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "ais/oms/task.hpp"

namespace ais::oms {

/// Topic set mirrors the node graph: agents stream state to everyone,
/// status to the master, and the master addresses directives to one agent.
enum class Topic { position, velocity, ball_status, balloon_status, routine_status, directive };

struct StateSnapshot {
    VehicleState state;
    int priority_rank = 0; // avoidance precedence of the sender's task
};

struct StatusReport {
    TaskKind task = TaskKind::takeoff;
    TaskStatus status = TaskStatus::active;
    bool ball_visible = false;
    int pops_confirmed = 0;
    bool mission_done = false;
    std::optional<Vec3> standoff;      // from the tracker once the fit converges
    std::optional<double> target_speed; // m/s estimate
    std::optional<Vec3> target_center;
};

struct TaskDirective {
    Task task;
    std::optional<Vec3> position_hint; // standby point, target center, ...
    std::optional<double> speed_hint;
};

using Payload = std::variant<StateSnapshot, StatusReport, TaskDirective, MissionEvent>;

struct BusMessage {
    Topic topic = Topic::position;
    int sender = -1;
    int addressee = -1; // directives only
    double t = 0.0;
    Payload payload;
};

struct FaultConfig {
    double drop_prob = 0.0;
    int latency_ticks = 0;
    std::map<int, double> comms_lost_at; // agent id -> time of link loss
    std::map<int, double> agent_kill_at; // agent id -> time of failure
};

/// Deterministic tick-boundary bus: publishes buffer within a tick, deliver()
/// routes them into per-agent inboxes with optional per-link drops/latency.
class MessageBus {
  public:
    MessageBus(int master_id, std::vector<int> agent_ids, const FaultConfig& faults,
               std::uint64_t seed);

    void publish(BusMessage msg);
    void deliver(double now);
    std::vector<BusMessage> drain_inbox(int id);

    bool comms_down(int agent_id, double now) const;

  private:
    void route(const BusMessage& msg, double now);

    int master_id_;
    std::vector<int> agent_ids_; // sorted, excludes master
    FaultConfig faults_;
    std::mt19937_64 rng_;
    std::vector<BusMessage> outbox_;
    std::deque<std::pair<int, BusMessage>> delayed_; // (ticks left, message)
    std::map<int, std::vector<BusMessage>> inboxes_;
};

}  // namespace ais::oms
