#include "ais/runner/mission.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "ais/safety/quickhull.hpp"

namespace ais::runner {

namespace {

std::string csv_row(double t, const VehicleState& s, oms::TaskKind task,
                    const std::vector<std::string>& events) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%.3f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s,", t, s.position.x(),
                  s.position.y(), s.position.z(), s.velocity.x(), s.velocity.y(),
                  s.velocity.z(), s.yaw, oms::to_string(task));
    std::string row(buf);
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i) row += ';';
        row += events[i];
    }
    row += '\n';
    return row;
}

}  // namespace

MissionArtifacts run_mission(const ScenarioConfig& cfg) {
    const auto wall_start = std::chrono::steady_clock::now();
    MissionArtifacts art;

    const safety::FenceHull hull = safety::quickhull3(cfg.arena_boundary);

    std::vector<simworld::UavInit> inits;
    std::vector<oms::AgentConfig> agent_cfgs;
    std::vector<int> ids;
    for (const auto& u : cfg.uavs) {
        inits.push_back({u.id, u.start, u.start_yaw});
        agent_cfgs.push_back({u.id, u.role, u.standby});
        ids.push_back(u.id);
    }

    simworld::World world(cfg.world, cfg.seed, inits);
    constexpr int kMasterId = 0; // base station
    oms::MessageBus bus(kMasterId, ids, cfg.faults, cfg.seed);
    oms::Allocator master(kMasterId, agent_cfgs);

    std::vector<std::unique_ptr<AgentExecutor>> agents;
    for (const auto& u : cfg.uavs)
        agents.push_back(std::make_unique<AgentExecutor>(u, cfg, &hull));

    std::map<int, std::string> telemetry;
    for (int id : ids)
        telemetry[id] = "t,px,py,pz,vx,vy,vz,yaw,active_task,events\n";
    std::string events_csv = "t,agent,event\n";

    // initial directives (takeoff) reach the agents on the first delivery
    for (auto& msg : master.tick(0.0, {})) bus.publish(std::move(msg));

    MissionSummary& sum = art.summary;
    const int ticks = static_cast<int>(cfg.duration / cfg.world.dt);
    std::map<int, bool> agent_dead;

    for (int k = 0; k < ticks; ++k) {
        const double t = world.time();
        bus.deliver(t);

        // master consumes status first, then issues next-tick directives
        for (auto& msg : master.tick(t, bus.drain_inbox(kMasterId))) bus.publish(std::move(msg));
        if (master.mission_aborted()) {
            sum.aborted = true;
            break;
        }

        const auto contacts = world.take_contact_events();
        for (const auto& c : contacts) {
            if (c.kind == simworld::ContactEvent::Kind::grab_success) {
                sum.grab_success = true;
                if (sum.grab_time < 0.0) sum.grab_time = c.t;
            }
        }

        std::vector<control::AutopilotCommand> commands(agents.size());
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const int id = ids[i];

            // scheduled hardware failures
            auto kill = cfg.faults.agent_kill_at.find(id);
            const bool alive = !(kill != cfg.faults.agent_kill_at.end() && t >= kill->second);
            if (!alive && !agent_dead[id]) {
                agent_dead[id] = true;
                oms::BusMessage msg; // the master's monitoring notices the failure
                msg.topic = oms::Topic::routine_status;
                msg.sender = id;
                msg.t = t;
                oms::MissionEvent ev;
                ev.kind = oms::EventKind::agent_failed;
                ev.agent_id = id;
                ev.t = t;
                msg.payload = ev;
                bus.publish(std::move(msg));
            }

            AgentExecutor::TickInput in;
            in.t = t;
            in.alive = alive;
            if (alive) in.frame = world.sense(static_cast<int>(i));
            in.inbox = bus.drain_inbox(id);
            for (const auto& c : contacts)
                if (c.uav_id == id) in.contacts.push_back(c);

            auto out = agents[i]->tick(world.uavs()[i], in);
            commands[i] = out.autopilot;
            for (auto& m : out.outgoing) bus.publish(std::move(m));
            if (out.fence_breach) ++sum.fence_breaches;

            telemetry[id] += csv_row(t, world.uavs()[i], agents[i]->active_task(), out.events);
            for (const auto& e : out.events) {
                char line[96];
                std::snprintf(line, sizeof(line), "%.3f,%d,%s\n", t, id, e.c_str());
                events_csv += line;
            }
        }

        for (std::size_t i = 0; i < agents.size(); ++i)
            for (std::size_t jj = i + 1; jj < agents.size(); ++jj)
                sum.min_separation =
                    std::min(sum.min_separation, (world.uavs()[i].position -
                                                  world.uavs()[jj].position)
                                                     .norm());

        world.step(commands);
        sum.sim_duration = world.time();
    }

    sum.balloons_popped =
        static_cast<int>(cfg.world.balloons.size()) - world.balloons_alive();

    art.task_switches = master.switches();
    art.telemetry_csv = std::move(telemetry);
    art.events_csv = std::move(events_csv);
    art.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
            .count();
    return art;
}

void write_artifacts(const MissionArtifacts& art, const ScenarioConfig& cfg,
                     const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    for (const auto& [id, csv] : art.telemetry_csv) {
        std::ofstream f(out_dir + "/agent_" + std::to_string(id) + "_telemetry.csv");
        f << csv;
    }
    {
        std::ofstream f(out_dir + "/task_switches.csv");
        f << "t,agent,old_task,new_task,trigger\n";
        for (const auto& s : art.task_switches) {
            char line[160];
            std::snprintf(line, sizeof(line), "%.3f,%d,%s,%s,%s\n", s.t, s.agent_id,
                          oms::to_string(s.old_task), oms::to_string(s.new_task),
                          s.trigger.c_str());
            f << line;
        }
    }
    {
        std::ofstream f(out_dir + "/events.csv");
        f << art.events_csv;
    }
    {
        nlohmann::json j;
        j["grab_success"] = art.summary.grab_success;
        j["grab_time_s"] = art.summary.grab_time;
        j["balloons_popped"] = art.summary.balloons_popped;
        j["min_inter_uav_distance_m"] = art.summary.min_separation;
        j["fence_breaches"] = art.summary.fence_breaches;
        j["sim_duration_s"] = art.summary.sim_duration;
        j["wall_seconds"] = art.summary.wall_seconds;
        j["aborted"] = art.summary.aborted;
        j["seed"] = cfg.seed;
        std::ofstream f(out_dir + "/summary.json");
        f << j.dump(2) << "\n";
    }
}

}  // namespace ais::runner
