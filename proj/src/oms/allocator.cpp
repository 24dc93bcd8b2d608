#include "ais/oms/allocator.hpp"

#include <nlohmann/json.hpp>

namespace ais::oms {

using nlohmann::json;

Allocator::Allocator(int master_id, std::vector<AgentConfig> agents)
    : master_id_(master_id) {
    for (const auto& a : agents) {
        AgentState st;
        st.cfg = a;
        agents_.push_back(st);
    }
    // static mission plan: everyone takes off, then the grabbers sweep for
    // the ball while the popper runs the lawn-mower grid
    for (auto& a : agents_) assign(a, TaskKind::takeoff, TaskClass::static_task, 0.0, "mission_start");
}

Allocator::AgentState* Allocator::find(int id) {
    for (auto& a : agents_)
        if (a.cfg.id == id) return &a;
    return nullptr;
}

Allocator::AgentState* Allocator::partner_grabber(int id) {
    for (auto& a : agents_)
        if (a.cfg.id != id && a.cfg.role == Role::grabber && a.alive) return &a;
    return nullptr;
}

void Allocator::assign(AgentState& agent, TaskKind kind, TaskClass cls, double t,
                       const std::string& trigger) {
    if (agent.active_task_id >= 0) {
        for (auto& task : registry_)
            if (task.id == agent.active_task_id && task.status == TaskStatus::active)
                task.status = TaskStatus::done;
    }
    const TaskKind old = agent.active;

    Task task;
    task.id = next_task_id_++;
    task.kind = kind;
    task.task_class = cls;
    task.priority = TaskPriority::mission;
    task.assignee = agent.cfg.id;
    task.status = TaskStatus::active;
    registry_.push_back(task);

    agent.active = kind;
    agent.active_task_id = task.id;
    switches_.push_back({t, agent.cfg.id, old, kind, trigger});
    push_directive(agent, t);
}

void Allocator::push_directive(const AgentState& agent, double t) {
    TaskDirective d;
    for (const auto& task : registry_)
        if (task.id == agent.active_task_id) d.task = task;

    switch (agent.active) {
        case TaskKind::grab_standby:
            d.position_hint = standoff_ ? *standoff_ : agent.cfg.standby_position;
            break;
        case TaskKind::track:
        case TaskKind::grab:
            d.position_hint = target_center_;
            d.speed_hint = target_speed_;
            break;
        default:
            break;
    }

    BusMessage msg;
    msg.topic = Topic::directive;
    msg.sender = master_id_;
    msg.addressee = agent.cfg.id;
    msg.t = t;
    msg.payload = d;
    out_.push_back(std::move(msg));
}

void Allocator::handle_event(const MissionEvent& ev, double t) {
    AgentState* agent = find(ev.agent_id);
    if (!agent) return;

    switch (ev.kind) {
        case EventKind::ball_detected: {
            if (agent->cfg.role != Role::grabber || ball_grabbed_) break;
            bool someone_tracking = false;
            for (const auto& a : agents_)
                if (a.alive && (a.active == TaskKind::track || a.active == TaskKind::grab))
                    someone_tracking = true;
            if (someone_tracking) break;
            assign(*agent, TaskKind::track, TaskClass::dynamic_task, t, "ball_detected");
            if (AgentState* p = partner_grabber(agent->cfg.id))
                assign(*p, TaskKind::grab_standby, TaskClass::dynamic_task, t,
                       "ball_detected");
            break;
        }

        case EventKind::ball_lost:
        case EventKind::grab_failed: {
            if (ball_grabbed_) break;
            const char* trig = ev.kind == EventKind::ball_lost ? "ball_lost" : "grab_failed";
            AgentState* p = partner_grabber(agent->cfg.id);
            if (p && p->active == TaskKind::grab_standby && p->ball_visible) {
                // roles swap; the partner resumes from where tracking stood
                if (tracking_complete_)
                    assign(*p, TaskKind::grab, TaskClass::dynamic_task, t, trig);
                else
                    assign(*p, TaskKind::track, TaskClass::dynamic_task, t, trig);
                assign(*agent, TaskKind::grab_standby, TaskClass::dynamic_task, t, trig);
            } else {
                // nobody to hand over to: reacquire first, grab only on sight
                const TaskKind next = tracking_complete_ && agent->ball_visible
                                          ? TaskKind::grab
                                          : TaskKind::track;
                if (next != agent->active)
                    assign(*agent, next, TaskClass::dynamic_task, t, trig);
            }
            break;
        }

        case EventKind::grab_success: {
            if (ev.payload_kg + 1e-12 < kGrabDetectMinKg) break; // limit switches silent
            ball_grabbed_ = true;
            assign(*agent, TaskKind::land, TaskClass::static_task, t, "grab_success");
            if (AgentState* p = partner_grabber(agent->cfg.id))
                assign(*p, TaskKind::land, TaskClass::static_task, t, "grab_success");
            break;
        }

        case EventKind::balloon_detected:
            if (agent->cfg.role == Role::popper && agent->active == TaskKind::explore_balloon)
                assign(*agent, TaskKind::pop, TaskClass::dynamic_task, t, "balloon_detected");
            break;

        case EventKind::balloon_popped:
            ++agent->pops;
            break;

        case EventKind::exploration_complete:
            if (agent->cfg.role == Role::popper)
                assign(*agent, TaskKind::land, TaskClass::static_task, t,
                       "exploration_complete");
            break;

        case EventKind::agent_failed: {
            agent->alive = false;
            const TaskKind orphaned = agent->active;
            if (agent->active_task_id >= 0)
                for (auto& task : registry_)
                    if (task.id == agent->active_task_id) task.status = TaskStatus::failed;
            agent->active_task_id = -1;

            // reallocate to a capable live agent, if any
            if (orphaned == TaskKind::track || orphaned == TaskKind::grab) {
                if (AgentState* p = partner_grabber(agent->cfg.id))
                    assign(*p, orphaned, TaskClass::dynamic_task, t, "agent_failed");
            }
            bool any_alive = false;
            for (const auto& a : agents_) any_alive |= a.alive;
            if (!any_alive) aborted_ = true;
            break;
        }

        case EventKind::comms_lost:
            // the agent keeps executing its current task standalone
            break;

        case EventKind::reset:
            break;
    }
}

void Allocator::handle_status(int sender, const StatusReport& report, double t) {
    AgentState* agent = find(sender);
    if (!agent || !agent->alive) return;
    agent->ball_visible = report.ball_visible;
    agent->pops = report.pops_confirmed;
    if (report.standoff) standoff_ = report.standoff;
    if (report.target_center) target_center_ = report.target_center;
    if (report.target_speed) target_speed_ = report.target_speed;

    if (report.status != TaskStatus::done || report.task != agent->active) return;

    switch (report.task) {
        case TaskKind::takeoff:
            assign(*agent,
                   agent->cfg.role == Role::grabber ? TaskKind::explore_ball
                                                    : TaskKind::explore_balloon,
                   TaskClass::static_task, t, "takeoff_done");
            break;
        case TaskKind::track:
            // curve parameters estimated: tracking is complete, go grab
            tracking_complete_ = true;
            assign(*agent, TaskKind::grab, TaskClass::dynamic_task, t, "tracking_done");
            if (AgentState* p = partner_grabber(agent->cfg.id))
                if (p->active == TaskKind::grab_standby)
                    push_directive(*p, t); // refresh with the fitted standoff point
            break;
        case TaskKind::pop:
            assign(*agent,
                   report.mission_done ? TaskKind::land : TaskKind::explore_balloon,
                   report.mission_done ? TaskClass::static_task : TaskClass::static_task,
                   t, report.mission_done ? "popping_done" : "pop_confirmed");
            break;
        case TaskKind::explore_balloon:
            if (report.mission_done)
                assign(*agent, TaskKind::land, TaskClass::static_task, t,
                       "exploration_complete");
            break;
        case TaskKind::land:
            break;
        default:
            break;
    }
}

std::vector<BusMessage> Allocator::tick(double t, const std::vector<BusMessage>& inbox) {
    now_ = t;
    out_.clear();
    for (const auto& msg : inbox) {
        if (const auto* ev = std::get_if<MissionEvent>(&msg.payload))
            handle_event(*ev, t);
        else if (const auto* st = std::get_if<StatusReport>(&msg.payload))
            handle_status(msg.sender, *st, t);
    }
    return out_;
}

TaskKind Allocator::active_task(int agent_id) const {
    for (const auto& a : agents_)
        if (a.cfg.id == agent_id) return a.active;
    return TaskKind::takeoff;
}

std::string Allocator::snapshot_json() const {
    json j;
    j["tracking_complete"] = tracking_complete_;
    j["ball_grabbed"] = ball_grabbed_;
    j["next_task_id"] = next_task_id_;
    j["time"] = now_;
    for (const auto& a : agents_) {
        json ja;
        ja["id"] = a.cfg.id;
        ja["alive"] = a.alive;
        ja["active"] = to_string(a.active);
        ja["pops"] = a.pops;
        j["agents"].push_back(ja);
    }
    for (const auto& task : registry_) {
        json jt;
        jt["id"] = task.id;
        jt["kind"] = to_string(task.kind);
        jt["assignee"] = task.assignee;
        jt["status"] = to_string(task.status);
        j["tasks"].push_back(jt);
    }
    return j.dump(2);
}

void Allocator::restore_snapshot(const std::string& json_text) {
    const json j = json::parse(json_text);
    tracking_complete_ = j.value("tracking_complete", false);
    ball_grabbed_ = j.value("ball_grabbed", false);
    next_task_id_ = j.value("next_task_id", 1);
    if (j.contains("agents"))
        for (const auto& ja : j["agents"]) {
            if (AgentState* a = find(ja.value("id", -1))) {
                a->alive = ja.value("alive", true);
                a->pops = ja.value("pops", 0);
            }
        }
}

}  // namespace ais::oms
