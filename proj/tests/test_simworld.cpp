#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "ais/simworld/world.hpp"

using namespace ais;
using namespace ais::simworld;

namespace {

WorldConfig base_config() {
    WorldConfig cfg;
    cfg.target.center = Vec3(0.0, 0.0, 10.0);
    cfg.target.speed = 2.0;
    return cfg;
}

std::string fingerprint(const World& w) {
    char buf[256];
    std::string out;
    for (const auto& s : w.uavs()) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g|", s.position.x(),
                      s.position.y(), s.position.z(), s.yaw);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "b:%.17g,%.17g,%.17g", w.ball_position().x(),
                  w.ball_position().y(), w.ball_position().z());
    out += buf;
    return out;
}

}  // namespace

TEST_CASE("determinism: same seed, same commands, identical evolution") {
    auto cfg = base_config();
    BalloonModel b;
    b.anchor = Vec3(5.0, 5.0, 1.5);
    cfg.balloons.push_back(b);

    World w1(cfg, 99, {{1, Vec3(-4, 2.5, 8.5), 0.0}, {2, Vec3(5, 0, 0), 0.0}});
    World w2(cfg, 99, {{1, Vec3(-4, 2.5, 8.5), 0.0}, {2, Vec3(5, 0, 0), 0.0}});

    std::string log1, log2;
    for (int k = 0; k < 300; ++k) {
        control::AutopilotCommand c;
        c.v_d = Vec3(0.5, 0.2, 0.1);
        const auto f1 = w1.sense(0);
        const auto f2 = w2.sense(0);
        if (f1.ball) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g;", f1.ball->pixel.t_x,
                          f1.ball->pixel.t_y);
            log1 += buf;
        }
        if (f2.ball) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g;", f2.ball->pixel.t_x,
                          f2.ball->pixel.t_y);
            log2 += buf;
        }
        w1.step({c, c});
        w2.step({c, c});
        REQUIRE(fingerprint(w1) == fingerprint(w2));
    }
    CHECK(log1 == log2);
    CHECK(!log1.empty());
}

TEST_CASE("plant: exact first-order response to a constant command") {
    auto cfg = base_config();
    cfg.has_target = false;
    World w(cfg, 1, {{1, Vec3::Zero(), 0.0}});

    control::AutopilotCommand c;
    c.v_d = Vec3(1.0, 0.0, 0.0);
    for (int k = 1; k <= 500; ++k) {
        w.step({c});
        const double analytic = 1.0 - std::exp(-cfg.dt * k / cfg.plant.tau_v);
        REQUIRE(std::abs(w.uavs()[0].velocity.x() - analytic) < 1e-9);
    }
}

TEST_CASE("plant: speed never exceeds the largest command seen") {
    auto cfg = base_config();
    cfg.has_target = false;
    World w(cfg, 2, {{1, Vec3::Zero(), 0.0}});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    double max_cmd = 0.0;
    for (int k = 0; k < 400; ++k) {
        control::AutopilotCommand c;
        c.v_d = Vec3(u(rng), u(rng), u(rng));
        max_cmd = std::max(max_cmd, std::min(c.v_d.norm(), cfg.plant.speed_cap));
        w.step({c});
        CHECK(w.uavs()[0].velocity.norm() <= max_cmd + 1e-9);
    }
}

TEST_CASE("plant: commands above the cap are saturated") {
    auto cfg = base_config();
    cfg.has_target = false;
    World w(cfg, 2, {{1, Vec3::Zero(), 0.0}});
    control::AutopilotCommand c;
    c.v_d = Vec3(100.0, 0.0, 0.0);
    for (int k = 0; k < 2000; ++k) w.step({c});
    CHECK(w.uavs()[0].velocity.norm() == doctest::Approx(kMaxSpeedMps).epsilon(1e-6));
}

TEST_CASE("target: constant path speed and closed loop") {
    auto cfg = base_config();
    cfg.target.speed = 4.0;
    World w(cfg, 3, {{1, Vec3(50, 0, 0), 0.0}});

    // instantaneous speed equals the configured speed at every step
    for (int k = 0; k < 2000; ++k) {
        CHECK(w.target_velocity().norm() == doctest::Approx(4.0).epsilon(1e-6));
        w.step({control::AutopilotCommand{}});
    }

    // the lemniscate is 2*pi periodic: the path closes exactly
    const Vec3 start = cfg.target.point(0.0);
    const Vec3 once_around = cfg.target.point(2.0 * kPi);
    CHECK((start - once_around).norm() < 1e-6);
}

TEST_CASE("ball: rigid rod length holds at every step") {
    auto cfg = base_config();
    cfg.target.speed = 3.0;
    World w(cfg, 4, {{1, Vec3(50, 0, 0), 0.0}});
    for (int k = 0; k < 3000; ++k) {
        w.step({control::AutopilotCommand{}});
        REQUIRE((w.ball_position() - w.target_position()).norm() ==
                doctest::Approx(cfg.target.rod_length).epsilon(1e-9));
    }
}

TEST_CASE("sense: on-axis ball projects to the image center plus noise") {
    auto cfg = base_config();
    cfg.sensing.dropout_prob = 0.0;
    cfg.sensing.sigma_px = 2.0;
    cfg.target.speed = 0.0; // hold still

    // place the UAV so its camera (at the lateral mount) looks straight at the ball
    const Vec3 ball = cfg.target.point(cfg.target.start_param) +
                      Vec3(0.0, 0.0, -cfg.target.rod_length);
    const Vec3 mount_world(0.0, -0.6, 0.0); // yaw 0: body -y is world -y
    // camera sits 1 m behind the ball along +x (its optical axis)
    World w(cfg, 5, {{1, ball - Vec3(1.0, 0.0, 0.0) - mount_world, 0.0}});

    double sum = 0.0, sumsq = 0.0;
    int n = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto frame = w.sense(0);
        REQUIRE(frame.ball.has_value());
        sum += frame.ball->pixel.t_x;
        sumsq += frame.ball->pixel.t_x * frame.ball->pixel.t_x;
        ++n;
    }
    const double mean = sum / n;
    const double stddev = std::sqrt(sumsq / n - mean * mean);
    CHECK(mean == doctest::Approx(cfg.camera.w / 2.0).epsilon(0.001));
    CHECK(stddev > 1.8);
    CHECK(stddev < 2.2);
}

TEST_CASE("sense: ball behind the camera yields nothing") {
    auto cfg = base_config();
    cfg.sensing.dropout_prob = 0.0;
    cfg.target.speed = 0.0;
    const Vec3 ball = cfg.target.point(cfg.target.start_param) +
                      Vec3(0.0, 0.0, -cfg.target.rod_length);
    // camera ahead of the ball, looking away (+x)
    World w(cfg, 6, {{1, ball + Vec3(2.0, 0.6, 0.0), 0.0}});
    const auto frame = w.sense(0);
    CHECK_FALSE(frame.ball.has_value());
}

TEST_CASE("contacts: touching the ball with closing speed grabs it once") {
    auto cfg = base_config();
    cfg.target.speed = 0.0;
    const Vec3 ball = cfg.target.point(cfg.target.start_param) +
                      Vec3(0.0, 0.0, -cfg.target.rod_length);

    // end-effector (body -y offset at yaw 0: world (0,-0.6,0)) starts 0.2 m short
    const Vec3 start = ball - Vec3(0.0, -0.6, 0.0) - Vec3(0.18, 0.0, 0.0);
    World w(cfg, 7, {{1, start, 0.0}});
    control::AutopilotCommand c;
    c.v_d = Vec3(0.6, 0.0, 0.0); // above the detachment threshold

    int grabs = 0;
    for (int k = 0; k < 200; ++k) {
        w.step({c});
        for (const auto& ev : w.take_contact_events())
            if (ev.kind == ContactEvent::Kind::grab_success) {
                ++grabs;
                CHECK(ev.payload_kg == doctest::Approx(0.06));
            }
    }
    CHECK(grabs == 1);
    CHECK(w.ball_attached());
    // once attached the ball rides the end-effector
    CHECK((w.ball_position() - w.end_effector_position(0)).norm() < 1e-9);
}

TEST_CASE("contacts: a 0.25 m lateral miss does not grab") {
    auto cfg = base_config();
    cfg.target.speed = 0.0;
    const Vec3 ball = cfg.target.point(cfg.target.start_param) +
                      Vec3(0.0, 0.0, -cfg.target.rod_length);
    const Vec3 start = ball - Vec3(0.0, -0.6, 0.0) - Vec3(1.0, 0.0, 0.0) +
                       Vec3(0.0, 0.25, 0.0);
    World w(cfg, 8, {{1, start, 0.0}});
    control::AutopilotCommand c;
    c.v_d = Vec3(1.0, 0.0, 0.0);
    for (int k = 0; k < 300; ++k) {
        w.step({c});
        for (const auto& ev : w.take_contact_events())
            CHECK(ev.kind != ContactEvent::Kind::grab_success);
    }
    CHECK_FALSE(w.ball_attached());
}

TEST_CASE("contacts: flying through a balloon pops it exactly once") {
    auto cfg = base_config();
    cfg.has_target = false;
    BalloonModel b;
    b.anchor = Vec3(5.0, 0.0, 1.5);
    b.sway_amplitude = 0.0;
    cfg.balloons.push_back(b);

    // effector at world (0,-0.6,0) relative to center: aim the effector at it
    World w(cfg, 9, {{1, Vec3(0.0, 0.6, 1.5 + b.radius), 0.0}});
    control::AutopilotCommand c;
    c.v_d = Vec3(2.0, 0.0, 0.0);
    int pops = 0;
    for (int k = 0; k < 400; ++k) {
        w.step({c});
        for (const auto& ev : w.take_contact_events())
            if (ev.kind == ContactEvent::Kind::balloon_popped) ++pops;
    }
    CHECK(pops == 1);
    CHECK(w.balloons_alive() == 0);
}

TEST_CASE("balloons sway about the pole top") {
    auto cfg = base_config();
    BalloonModel b;
    b.anchor = Vec3(0.0, 0.0, 1.5);
    b.sway_amplitude = 0.3;
    b.sway_freq_hz = 0.5;
    double lo = 1e9, hi = -1e9;
    for (double t = 0.0; t < 4.0; t += 0.01) {
        const Vec3 p = b.position(t);
        const double lateral = (p - Vec3(0, 0, 1.5 + b.radius)).head<2>().norm();
        lo = std::min(lo, lateral);
        hi = std::max(hi, lateral);
        CHECK(lateral <= 0.3 + 1e-9);
    }
    CHECK(hi > 0.29); // reaches the amplitude
    CHECK(lo < 0.01); // and passes through center
}
