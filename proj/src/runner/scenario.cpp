#include "ais/runner/scenario.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace ais::runner {

using nlohmann::json;

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    // Table-spec arena, axis aligned, meters
    const double hx = 50.0, hy = 20.0, hz = 20.0;
    for (double x : {-hx, hx})
        for (double y : {-hy, hy})
            for (double z : {0.0, hz}) cfg.arena_boundary.emplace_back(x, y, z);

    cfg.world.dt = 0.02;
    cfg.world.target.center = Vec3(10.0, 0.0, 10.0);
    cfg.world.target.semi_axis_a = 10.0;
    cfg.world.target.semi_axis_b = 5.0;
    cfg.world.target.yaw = deg2rad(18.0);
    cfg.world.target.speed = 2.0;
    cfg.world.target.start_param = 0.7;

    const double anchors[5][2] = {
        {-35.0, -10.0}, {-20.0, 12.0}, {0.0, -12.0}, {20.0, 10.0}, {35.0, -8.0}};
    for (int i = 0; i < 5; ++i) {
        simworld::BalloonModel b;
        b.anchor = Vec3(anchors[i][0], anchors[i][1], 1.5);
        b.sway_phase = 0.9 * i;
        b.sway_direction = 1.3 * i;
        cfg.world.balloons.push_back(b);
    }

    // strong enough to stop a capped-speed run at the net
    cfg.fence.activation = 5.0;
    cfg.fence.gain = 2.0;

    cfg.uavs.push_back({1, oms::Role::grabber, Vec3(-4.0, -4.0, 0.0), 0.0,
                        Vec3(-12.0, -12.0, 10.0)});
    cfg.uavs.push_back({2, oms::Role::grabber, Vec3(4.0, -4.0, 0.0), 0.0,
                        Vec3(10.0, -16.0, 10.0)});
    cfg.uavs.push_back({3, oms::Role::popper, Vec3(0.0, 4.0, 0.0), 0.0,
                        Vec3(0.0, 15.0, 4.0)});
    return cfg;
}

namespace {

Vec3 vec3_of(const json& j) {
    return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}
json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("scenario: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("scenario parse error in " + path + ": " + e.what());
    }

    ScenarioConfig cfg = default_scenario();
    try {
        if (j.contains("arena")) {
            cfg.arena_boundary.clear();
            for (const auto& p : j.at("arena").at("boundary_points_m"))
                cfg.arena_boundary.push_back(vec3_of(p));
        }
        if (j.contains("dt_s")) cfg.world.dt = j.at("dt_s");
        if (j.contains("duration_s")) cfg.duration = j.at("duration_s");
        if (j.contains("seed")) cfg.seed = j.at("seed");

        if (j.contains("camera")) {
            const auto& c = j.at("camera");
            cfg.world.camera.f = c.value("focal_px", cfg.world.camera.f);
            cfg.world.camera.w = c.value("width_px", cfg.world.camera.w);
            cfg.world.camera.h = c.value("height_px", cfg.world.camera.h);
        }
        if (j.contains("sensing")) {
            const auto& s = j.at("sensing");
            cfg.world.sensing.sigma_px = s.value("pixel_noise_std_px", cfg.world.sensing.sigma_px);
            cfg.world.sensing.dropout_prob = s.value("dropout_prob", cfg.world.sensing.dropout_prob);
            cfg.world.sensing.max_range = s.value("max_range_m", cfg.world.sensing.max_range);
        }
        if (j.contains("target")) {
            const auto& t = j.at("target");
            auto& m = cfg.world.target;
            if (t.contains("center_m")) m.center = vec3_of(t.at("center_m"));
            m.semi_axis_a = t.value("semi_axis_a_m", m.semi_axis_a);
            m.semi_axis_b = t.value("semi_axis_b_m", m.semi_axis_b);
            m.yaw = deg2rad(t.value("yaw_deg", rad2deg(m.yaw)));
            m.pitch = deg2rad(t.value("pitch_deg", rad2deg(m.pitch)));
            m.roll = deg2rad(t.value("roll_deg", rad2deg(m.roll)));
            m.speed = t.value("speed_mps", m.speed);
            m.rod_length = t.value("rod_length_m", m.rod_length);
            m.ball_radius = t.value("ball_radius_m", m.ball_radius);
            m.start_param = t.value("start_param", m.start_param);
            cfg.world.has_target = t.value("present", true);
        }
        if (j.contains("balloons")) {
            cfg.world.balloons.clear();
            for (const auto& b : j.at("balloons")) {
                simworld::BalloonModel m;
                m.anchor = vec3_of(b.at("anchor_m"));
                m.radius = b.value("radius_m", m.radius);
                m.sway_amplitude = b.value("sway_amplitude_m", m.sway_amplitude);
                m.sway_freq_hz = b.value("sway_freq_hz", m.sway_freq_hz);
                m.sway_phase = b.value("sway_phase_rad", m.sway_phase);
                m.sway_direction = b.value("sway_direction_rad", m.sway_direction);
                cfg.world.balloons.push_back(m);
            }
        }
        if (j.contains("plant")) {
            cfg.world.plant.tau_v = j.at("plant").value("tau_v_s", cfg.world.plant.tau_v);
            cfg.world.plant.tau_r = j.at("plant").value("tau_r_s", cfg.world.plant.tau_r);
        }
        if (j.contains("uavs")) {
            cfg.uavs.clear();
            for (const auto& u : j.at("uavs")) {
                UavSpec s;
                s.id = u.at("id");
                s.role = u.at("role") == "popper" ? oms::Role::popper : oms::Role::grabber;
                s.start = vec3_of(u.at("start_m"));
                s.start_yaw = deg2rad(u.value("start_yaw_deg", 0.0));
                if (u.contains("standby_m")) s.standby = vec3_of(u.at("standby_m"));
                cfg.uavs.push_back(s);
            }
        }
        if (j.contains("gains")) {
            const auto& g = j.at("gains");
            cfg.tracking.d_track = g.value("d_track_m", cfg.tracking.d_track);
            cfg.tracking.k_pot = g.value("k_pot", cfg.tracking.k_pot);
            cfg.tracking.v_max_track = g.value("v_max_track_mps", cfg.tracking.v_max_track);
            cfg.tracking.kp_yaw = g.value("kp_yaw", cfg.tracking.kp_yaw);
            cfg.tracking.kd_yaw = g.value("kd_yaw", cfg.tracking.kd_yaw);
            cfg.grab.v_excess = g.value("v_excess_mps", cfg.grab.v_excess);
            cfg.grab.kp_yaw = cfg.tracking.kp_yaw;
            cfg.grab.kd_yaw = cfg.tracking.kd_yaw;
            if (g.contains("sac")) {
                cfg.sac.k_e = g.at("sac").value("k_e", cfg.sac.k_e);
                cfg.sac.k_x = g.at("sac").value("k_x", cfg.sac.k_x);
                cfg.sac.k_u = g.at("sac").value("k_u", cfg.sac.k_u);
                cfg.sac_tau = g.at("sac").value("tau_s", cfg.sac_tau);
            }
        }
        if (j.contains("safety")) {
            const auto& s = j.at("safety");
            cfg.avoidance.safe_radius = s.value("safe_radius_m", cfg.avoidance.safe_radius);
            cfg.avoidance.activation = s.value("activation_m", cfg.avoidance.activation);
            cfg.avoidance.gain = s.value("k_avoid", cfg.avoidance.gain);
            cfg.fence.activation = s.value("fence_activation_m", cfg.fence.activation);
            cfg.fence.gain = s.value("fence_gain", cfg.fence.gain);
        }
        if (j.contains("mission")) {
            const auto& m = j.at("mission");
            cfg.mission.grabber_altitude = m.value("grabber_altitude_m", cfg.mission.grabber_altitude);
            cfg.mission.popper_altitude = m.value("popper_altitude_m", cfg.mission.popper_altitude);
            cfg.mission.grid_spacing = m.value("grid_spacing_m", cfg.mission.grid_spacing);
            cfg.mission.explore_margin = m.value("explore_margin_m", cfg.mission.explore_margin);
            cfg.mission.lost_frames = m.value("lost_frames", cfg.mission.lost_frames);
            cfg.mission.confirm_frames = m.value("confirm_frames", cfg.mission.confirm_frames);
            cfg.mission.fit_window_s = m.value("fit_window_s", cfg.mission.fit_window_s);
            cfg.mission.fit_residual_max = m.value("fit_residual_max_m", cfg.mission.fit_residual_max);
            cfg.mission.standoff_offset = m.value("standoff_offset_m", cfg.mission.standoff_offset);
        }
        if (j.contains("faults")) {
            const auto& f = j.at("faults");
            cfg.faults.drop_prob = f.value("drop_prob", 0.0);
            cfg.faults.latency_ticks = f.value("latency_ticks", 0);
            if (f.contains("comms_lost"))
                for (const auto& k : f.at("comms_lost"))
                    cfg.faults.comms_lost_at[k.at("id")] = k.at("t_s");
            if (f.contains("agent_kill"))
                for (const auto& k : f.at("agent_kill"))
                    cfg.faults.agent_kill_at[k.at("id")] = k.at("t_s");
        }
    } catch (const json::exception& e) {
        throw Error("scenario field error in " + path + ": " + e.what());
    }
    return cfg;
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    json j;
    for (const auto& p : cfg.arena_boundary)
        j["arena"]["boundary_points_m"].push_back(vec3_json(p));
    j["dt_s"] = cfg.world.dt;
    j["duration_s"] = cfg.duration;
    j["seed"] = cfg.seed;
    j["camera"] = {{"focal_px", cfg.world.camera.f},
                   {"width_px", cfg.world.camera.w},
                   {"height_px", cfg.world.camera.h}};
    j["sensing"] = {{"pixel_noise_std_px", cfg.world.sensing.sigma_px},
                    {"dropout_prob", cfg.world.sensing.dropout_prob},
                    {"max_range_m", cfg.world.sensing.max_range}};
    j["target"] = {{"center_m", vec3_json(cfg.world.target.center)},
                   {"semi_axis_a_m", cfg.world.target.semi_axis_a},
                   {"semi_axis_b_m", cfg.world.target.semi_axis_b},
                   {"yaw_deg", rad2deg(cfg.world.target.yaw)},
                   {"pitch_deg", rad2deg(cfg.world.target.pitch)},
                   {"roll_deg", rad2deg(cfg.world.target.roll)},
                   {"speed_mps", cfg.world.target.speed},
                   {"rod_length_m", cfg.world.target.rod_length},
                   {"ball_radius_m", cfg.world.target.ball_radius},
                   {"start_param", cfg.world.target.start_param},
                   {"present", cfg.world.has_target}};
    for (const auto& b : cfg.world.balloons)
        j["balloons"].push_back({{"anchor_m", vec3_json(b.anchor)},
                                 {"radius_m", b.radius},
                                 {"sway_amplitude_m", b.sway_amplitude},
                                 {"sway_freq_hz", b.sway_freq_hz},
                                 {"sway_phase_rad", b.sway_phase},
                                 {"sway_direction_rad", b.sway_direction}});
    j["plant"] = {{"tau_v_s", cfg.world.plant.tau_v}, {"tau_r_s", cfg.world.plant.tau_r}};
    for (const auto& u : cfg.uavs)
        j["uavs"].push_back({{"id", u.id},
                             {"role", u.role == oms::Role::popper ? "popper" : "grabber"},
                             {"start_m", vec3_json(u.start)},
                             {"start_yaw_deg", rad2deg(u.start_yaw)},
                             {"standby_m", vec3_json(u.standby)}});
    j["gains"] = {{"d_track_m", cfg.tracking.d_track},
                  {"k_pot", cfg.tracking.k_pot},
                  {"v_max_track_mps", cfg.tracking.v_max_track},
                  {"kp_yaw", cfg.tracking.kp_yaw},
                  {"kd_yaw", cfg.tracking.kd_yaw},
                  {"v_excess_mps", cfg.grab.v_excess},
                  {"sac", {{"k_e", cfg.sac.k_e},
                           {"k_x", cfg.sac.k_x},
                           {"k_u", cfg.sac.k_u},
                           {"tau_s", cfg.sac_tau}}}};
    j["safety"] = {{"safe_radius_m", cfg.avoidance.safe_radius},
                   {"activation_m", cfg.avoidance.activation},
                   {"k_avoid", cfg.avoidance.gain},
                   {"fence_activation_m", cfg.fence.activation},
                   {"fence_gain", cfg.fence.gain}};
    j["mission"] = {{"grabber_altitude_m", cfg.mission.grabber_altitude},
                    {"popper_altitude_m", cfg.mission.popper_altitude},
                    {"grid_spacing_m", cfg.mission.grid_spacing},
                    {"explore_margin_m", cfg.mission.explore_margin},
                    {"lost_frames", cfg.mission.lost_frames},
                    {"confirm_frames", cfg.mission.confirm_frames},
                    {"fit_window_s", cfg.mission.fit_window_s},
                    {"fit_residual_max_m", cfg.mission.fit_residual_max},
                    {"standoff_offset_m", cfg.mission.standoff_offset}};

    std::ofstream out(path);
    if (!out) throw Error("scenario: cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace ais::runner
