#include "ais/oms/bus.hpp"

#include <algorithm>

namespace ais::oms {

const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::takeoff: return "takeoff";
        case TaskKind::explore_ball: return "explore_ball";
        case TaskKind::explore_balloon: return "explore_balloon";
        case TaskKind::track: return "track";
        case TaskKind::grab: return "grab";
        case TaskKind::grab_standby: return "grab_standby";
        case TaskKind::pop: return "pop";
        case TaskKind::land: return "land";
        case TaskKind::restart: return "restart";
    }
    return "?";
}

const char* to_string(TaskStatus s) {
    switch (s) {
        case TaskStatus::pending: return "pending";
        case TaskStatus::active: return "active";
        case TaskStatus::done: return "done";
        case TaskStatus::failed: return "failed";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::ball_detected: return "ball_detected";
        case EventKind::ball_lost: return "ball_lost";
        case EventKind::grab_success: return "grab_success";
        case EventKind::grab_failed: return "grab_failed";
        case EventKind::balloon_detected: return "balloon_detected";
        case EventKind::balloon_popped: return "balloon_popped";
        case EventKind::exploration_complete: return "exploration_complete";
        case EventKind::agent_failed: return "agent_failed";
        case EventKind::comms_lost: return "comms_lost";
        case EventKind::reset: return "reset";
    }
    return "?";
}

MessageBus::MessageBus(int master_id, std::vector<int> agent_ids,
                       const FaultConfig& faults, std::uint64_t seed)
    : master_id_(master_id), agent_ids_(std::move(agent_ids)), faults_(faults),
      rng_(seed ^ 0xb5ad4eceda1ce2a9ULL) {
    std::sort(agent_ids_.begin(), agent_ids_.end());
    inboxes_[master_id_];
    for (int id : agent_ids_) inboxes_[id];
}

bool MessageBus::comms_down(int agent_id, double now) const {
    auto it = faults_.comms_lost_at.find(agent_id);
    return it != faults_.comms_lost_at.end() && now >= it->second;
}

void MessageBus::publish(BusMessage msg) { outbox_.push_back(std::move(msg)); }

void MessageBus::route(const BusMessage& msg, double now) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto link_ok = [&](int from, int to) {
        if (comms_down(from, now) || comms_down(to, now)) return false;
        return faults_.drop_prob <= 0.0 || unit(rng_) >= faults_.drop_prob;
    };

    switch (msg.topic) {
        case Topic::position:
        case Topic::velocity:
            // state flows to every other agent and to the master
            for (int id : agent_ids_)
                if (id != msg.sender && link_ok(msg.sender, id))
                    inboxes_[id].push_back(msg);
            if (msg.sender != master_id_ && link_ok(msg.sender, master_id_))
                inboxes_[master_id_].push_back(msg);
            break;
        case Topic::ball_status:
        case Topic::balloon_status:
        case Topic::routine_status:
            if (link_ok(msg.sender, master_id_)) inboxes_[master_id_].push_back(msg);
            break;
        case Topic::directive:
            if (inboxes_.count(msg.addressee) && link_ok(msg.sender, msg.addressee))
                inboxes_[msg.addressee].push_back(msg);
            break;
    }
}

void MessageBus::deliver(double now) {
    std::vector<BusMessage> ready = std::exchange(outbox_, {});
    if (faults_.latency_ticks > 0) {
        // a message spends latency_ticks extra delivery cycles in flight
        for (auto& m : ready)
            delayed_.emplace_back(faults_.latency_ticks + 1, std::move(m));
        ready.clear();
        for (auto& [ticks, m] : delayed_) --ticks;
        while (!delayed_.empty() && delayed_.front().first <= 0) {
            ready.push_back(std::move(delayed_.front().second));
            delayed_.pop_front();
        }
    }
    for (const auto& m : ready) route(m, now);
}

std::vector<BusMessage> MessageBus::drain_inbox(int id) {
    return std::exchange(inboxes_[id], {});
}

}  // namespace ais::oms
