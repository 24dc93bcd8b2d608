#include "ais/runner/scenario_runs.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "ais/oms/blend.hpp"
#include "ais/safety/fence.hpp"

namespace ais::runner {

namespace {

double true_yaw_offset(const VehicleState& uav, const Vec3& target_world,
                       const CameraMount& mount) {
    const Vec3 cam_pos = core::camera_position(uav, mount);
    const Vec3 los = target_world - cam_pos;
    if (los.head<2>().norm() < 1e-9) return 0.0;
    return wrap_angle(std::atan2(los.y(), los.x()) - uav.yaw);
}

}  // namespace

void write_trace_csv(const std::vector<TraceSample>& trace, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write trace: " + path);
    f << "t,distance_m,yaw_offset_deg,cmd_vx,cmd_vy,cmd_vz,cmd_yaw_rate\n";
    for (const auto& s : trace) {
        char line[200];
        std::snprintf(line, sizeof(line), "%.3f,%.6f,%.4f,%.4f,%.4f,%.4f,%.5f\n", s.t,
                      s.distance, rad2deg(s.yaw_offset), s.cmd_velocity.x(),
                      s.cmd_velocity.y(), s.cmd_velocity.z(), s.cmd_yaw_rate);
        f << line;
    }
}

TrackResult run_track_scenario(const ScenarioConfig& cfg, double duration_s) {
    simworld::WorldConfig wc = cfg.world;
    wc.balloons.clear();

    // start outside the tracking radius with the ball in view
    const Vec3 ball0 = wc.target.point(wc.target.start_param) +
                       Vec3(0.0, 0.0, -wc.target.rod_length);
    const Vec3 start = ball0 + Vec3(-14.0, 0.0, 1.0);
    const Vec3 look = ball0 - start;
    simworld::World world(wc, cfg.seed, {{1, start, std::atan2(look.y(), look.x())}});

    guidance::YawController yaw;
    control::ReferenceModel ref;
    ref.tau = cfg.sac_tau;
    vision::BallSearchConfig bc;
    bc.ball_radius = wc.target.ball_radius;
    bc.rod_length = wc.target.rod_length;
    bc.rod_tolerance = 60.0;

    TrackResult result;
    const int ticks = static_cast<int>(duration_s / wc.dt);
    int in_band = 0, yaw_ok = 0, post = 0;

    for (int k = 0; k < ticks; ++k) {
        const auto frame = world.sense(0);
        std::optional<PixelObservation> obs;
        if (frame.ball &&
            (!frame.ball->rod_visible || vision::score(frame.ball->contour, bc) >= 0.0))
            obs = frame.ball->pixel;

        auto cmd = guidance::track_command(obs, world.uavs()[0], cfg.tracking, bc,
                                           wc.camera, wc.mount, yaw, wc.dt);
        if (!obs && !frame.uav_boxes.empty()) {
            // search-phase fallback: keep the camera on the target UAV box
            const auto& box = frame.uav_boxes.front().box;
            PixelObservation center;
            center.t_x = box.cx;
            center.t_y = box.cy;
            const Vec2 p = core::center_pixels(center, wc.camera);
            const Vec3 los_world = core::camera_to_world(
                core::los_unit_vector(p.x(), p.y(), wc.camera.f), wc.mount.cam_to_body,
                world.uavs()[0].body_to_world());
            cmd.r_des = yaw.command(los_world, world.uavs()[0].yaw, cfg.tracking.kp_yaw,
                                    cfg.tracking.kd_yaw, wc.dt);
        }
        const auto pilot = control::sac_step(cmd, world.uavs()[0], ref, cfg.sac, wc.dt);

        TraceSample s;
        s.t = world.time();
        s.distance =
            (world.ball_position() - core::camera_position(world.uavs()[0], wc.mount))
                .norm();
        s.yaw_offset = true_yaw_offset(world.uavs()[0], world.ball_position(), wc.mount);
        s.cmd_velocity = cmd.v_des;
        s.cmd_yaw_rate = cmd.r_des;
        result.trace.push_back(s);

        if (s.t >= result.transient_s) {
            ++post;
            if (std::abs(s.distance - cfg.tracking.d_track) <= 1.5) ++in_band;
            if (std::abs(s.yaw_offset) <= deg2rad(10.0)) ++yaw_ok;
        }
        world.step({pilot});
    }
    if (post > 0) {
        result.fraction_in_band = static_cast<double>(in_band) / post;
        result.fraction_yaw_ok = static_cast<double>(yaw_ok) / post;
    }
    return result;
}

GrabResult run_grab_scenario(const ScenarioConfig& cfg, double duration_s) {
    simworld::WorldConfig wc = cfg.world;
    wc.balloons.clear();

    // seeded engagement geometry: behind and to the side of the ball
    std::mt19937_64 rng(cfg.seed * 0x2545f4914f6cdd1dULL + 11);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    const Vec3 ball0 = wc.target.point(wc.target.start_param) +
                       Vec3(0.0, 0.0, -wc.target.rod_length);
    const Vec3 behind = -wc.target.tangent(wc.target.start_param);
    const Vec3 start = ball0 + 10.0 * behind +
                       Vec3(2.0 * jitter(rng), 2.0 * jitter(rng), 1.0 + jitter(rng));
    const Vec3 look = ball0 - start;
    simworld::World world(wc, cfg.seed, {{1, start, std::atan2(look.y(), look.x())}});

    guidance::YawController yaw;
    control::ReferenceModel ref;
    ref.tau = cfg.sac_tau;

    GrabResult result;
    guidance::GuidanceCommand last_cmd;
    const int ticks = static_cast<int>(duration_s / wc.dt);

    for (int k = 0; k < ticks; ++k) {
        const auto frame = world.sense(0);
        std::optional<PixelObservation> obs;
        if (frame.ball) obs = frame.ball->pixel;

        guidance::GuidanceCommand cmd;
        if (obs) {
            cmd = guidance::grab_command(obs, world.uavs()[0], cfg.grab, wc.camera,
                                         wc.mount, yaw, wc.dt);
            last_cmd = cmd;
        } else {
            cmd = last_cmd; // ride through dropouts in the terminal phase
        }
        const auto pilot = control::sac_step(cmd, world.uavs()[0], ref, cfg.sac, wc.dt);

        TraceSample s;
        s.t = world.time();
        s.distance =
            (world.ball_position() - core::camera_position(world.uavs()[0], wc.mount))
                .norm();
        s.yaw_offset = true_yaw_offset(world.uavs()[0], world.ball_position(), wc.mount);
        s.cmd_velocity = cmd.v_des;
        s.cmd_yaw_rate = cmd.r_des;
        result.trace.push_back(s);
        result.final_distance = s.distance;

        world.step({pilot});
        for (const auto& ev : world.take_contact_events()) {
            if (ev.kind == simworld::ContactEvent::Kind::grab_success) {
                result.success = true;
                result.grab_time = ev.t;
            }
        }
        if (result.success) break;
    }
    return result;
}

std::vector<GrabResult> run_grab_sweep(const ScenarioConfig& base,
                                       const std::vector<std::uint64_t>& seeds,
                                       double duration_s, bool parallel) {
    std::vector<GrabResult> results(seeds.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(seeds.size()); ++i) {
            ScenarioConfig cfg = base;
            cfg.seed = seeds[i];
            results[i] = run_grab_scenario(cfg, duration_s);
        }
    } else {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            ScenarioConfig cfg = base;
            cfg.seed = seeds[i];
            results[i] = run_grab_scenario(cfg, duration_s);
        }
    }
    return results;
}

PopResult run_pop_scenario(const ScenarioConfig& cfg, double duration_s) {
    simworld::WorldConfig wc = cfg.world;
    wc.has_target = false;

    const safety::FenceHull hull = safety::quickhull3(cfg.arena_boundary);
    oms::ExplorationConfig ec;
    ec.altitude = cfg.mission.popper_altitude;
    ec.grid_spacing = cfg.mission.grid_spacing;
    ec.margin = cfg.mission.explore_margin;
    const auto waypoints = oms::exploration_waypoints(oms::ExploreKind::balloon, hull, ec);

    simworld::World world(wc, cfg.seed,
                          {{1, Vec3(0.0, 0.0, cfg.mission.popper_altitude), 0.0}});
    guidance::YawController yaw;
    control::ReferenceModel ref;
    ref.tau = cfg.sac_tau;

    oms::PopperState st;
    oms::PopperConfig pc;
    pc.v_approach = cfg.grab.v_target + cfg.grab.v_excess;
    pc.empty_view_frames = cfg.mission.confirm_frames;
    pc.nav = cfg.nav;

    PopResult result;
    const int ticks = static_cast<int>(duration_s / wc.dt);
    for (int k = 0; k < ticks; ++k) {
        const auto frame = world.sense(0);
        std::optional<PixelObservation> obs;
        std::optional<Vec3> est;
        std::vector<double> depths;
        for (const auto& b : frame.balloons)
            depths.push_back(core::depth_from_size(std::max(b.pixel.apparent_radius, 0.3),
                                                   wc.balloons[b.balloon_index].radius,
                                                   wc.camera.f));
        const int pick = guidance::select_nearest_balloon(depths);
        if (pick >= 0) {
            obs = frame.balloons[pick].pixel;
            est = vision::balloon_position(frame.balloons[pick].contour,
                                           wc.balloons[frame.balloons[pick].balloon_index].radius,
                                           wc.camera, world.uavs()[0], wc.mount);
        }

        const auto step = oms::balloon_mission_step(st, world.uavs()[0], obs, est,
                                                    waypoints, pc, wc.camera, wc.mount,
                                                    yaw, wc.dt);
        const auto pilot = control::sac_step(step.command, world.uavs()[0], ref, cfg.sac,
                                             wc.dt);
        world.step({pilot});
        world.take_contact_events();

        result.pops = st.pops_confirmed;
        result.elapsed = world.time();
        if (step.mission_done) {
            result.mission_done = true;
            break;
        }
    }
    return result;
}

AvoidResult run_avoid_scenario(const ScenarioConfig& cfg, double approach_speed,
                               double start_distance, std::uint64_t seed,
                               double duration_s) {
    simworld::WorldConfig wc = cfg.world;
    wc.has_target = false;
    wc.balloons.clear();
    wc.sensing.dropout_prob = 0.0;

    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 77);
    std::uniform_real_distribution<double> off(-1.5, 1.5);
    const double half = start_distance / 2.0;
    const Vec3 a(-half, off(rng), 10.0 + 0.5 * off(rng));
    const Vec3 b(half, off(rng), 10.0 + 0.5 * off(rng));

    simworld::World world(wc, seed, {{1, a, 0.0}, {2, b, kPi}});
    control::ReferenceModel refs[2];
    refs[0].tau = refs[1].tau = cfg.sac_tau;
    Vec3 safety_vel[2] = {Vec3::Zero(), Vec3::Zero()};
    const Vec3 goals[2] = {b, a}; // swap positions: guaranteed conflict

    AvoidResult result;
    result.min_separation = (a - b).norm();
    const int ticks = static_cast<int>(duration_s / wc.dt);

    for (int k = 0; k < ticks; ++k) {
        std::vector<control::AutopilotCommand> cmds(2);
        TraceSample s;
        s.t = world.time();
        s.distance = (world.uavs()[0].position - world.uavs()[1].position).norm();
        result.min_separation = std::min(result.min_separation, s.distance);

        for (int i = 0; i < 2; ++i) {
            const auto& self = world.uavs()[i];
            const auto& other = world.uavs()[1 - i];

            guidance::GuidanceCommand mission;
            const Vec3 to_goal = goals[i] - self.position;
            if (to_goal.norm() > 0.5)
                mission.v_des = approach_speed * to_goal.normalized();

            const auto kin = safety::relative_kinematics(self, other);
            const Vec3 accel =
                safety::avoidance_accel(kin, safety::Priority::equal, cfg.avoidance);
            safety_vel[i] = safety_vel[i] * std::exp(-wc.dt / 3.0) + accel * wc.dt;
            if (accel.norm() > 1e-9) mission.v_des = Vec3::Zero();

            const Vec3 synth = safety_vel[i] / wc.dt;
            const Vec3 accels[] = {synth};
            const auto blended = oms::blend_commands(mission, accels, wc.dt);
            if (i == 0) {
                s.cmd_velocity = blended.v_des;
                s.cmd_yaw_rate = blended.r_des;
            }
            cmds[i] = control::sac_step(blended, self, refs[i], cfg.sac, wc.dt);
        }
        result.trace.push_back(s);
        world.step(cmds);
    }
    return result;
}

std::vector<AvoidResult> run_avoid_sweep(const ScenarioConfig& base, int count,
                                         double approach_speed, double start_distance,
                                         std::uint64_t base_seed, double duration_s,
                                         bool parallel) {
    std::vector<AvoidResult> results(count);
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i)
            results[i] = run_avoid_scenario(base, approach_speed, start_distance,
                                            base_seed + i, duration_s);
    } else {
        for (int i = 0; i < count; ++i)
            results[i] = run_avoid_scenario(base, approach_speed, start_distance,
                                            base_seed + i, duration_s);
    }
    return results;
}

FenceResult run_fence_scenario(const ScenarioConfig& cfg, double duration_s) {
    simworld::WorldConfig wc = cfg.world;
    wc.has_target = false;
    wc.balloons.clear();

    const safety::FenceHull hull = safety::quickhull3(cfg.arena_boundary);
    simworld::World world(wc, cfg.seed, {{1, hull.centroid(), 0.0}});
    control::ReferenceModel ref;
    ref.tau = cfg.sac_tau;

    FenceResult result;
    const int ticks = static_cast<int>(duration_s / wc.dt);
    const Vec3 push_dirs[4] = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(-1, 0.3, 0.1).normalized(),
                               Vec3(0.2, -1, 0.2).normalized()};

    for (int k = 0; k < ticks; ++k) {
        const auto& self = world.uavs()[0];
        guidance::GuidanceCommand mission;
        mission.v_des = 4.0 * push_dirs[(k * 4) / std::max(ticks, 1)];

        const auto fence = safety::fence_repulsion(self.position, hull, cfg.fence);
        if (fence.breach) ++result.breaches;

        const Vec3 synth = fence.velocity / wc.dt;
        const Vec3 accels[] = {synth};
        const auto blended = oms::blend_commands(mission, accels, wc.dt);
        const auto pilot = control::sac_step(blended, self, ref, cfg.sac, wc.dt);

        TraceSample s;
        s.t = world.time();
        s.distance = hull.signed_distance(self.position);
        s.cmd_velocity = blended.v_des;
        result.max_signed_distance = std::max(result.max_signed_distance, s.distance);
        result.trace.push_back(s);
        world.step({pilot});
    }
    return result;
}

}  // namespace ais::runner
