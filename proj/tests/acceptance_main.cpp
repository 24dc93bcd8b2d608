// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line each.  Exit status 0 only when all pass.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "ais/engagement/sizing.hpp"
#include "ais/estimation/curve_fit.hpp"
#include "ais/estimation/target_ekf.hpp"
#include "ais/runner/mission.hpp"
#include "ais/runner/scenario_runs.hpp"
#include "ais/safety/collision_cone.hpp"
#include "ais/safety/quickhull.hpp"
#include "ais/vision/hungarian.hpp"

using namespace ais;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %-22s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++g_failures;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------- sizing ---
void criterion_sizing() {
    const double t0 = now_s();
    using namespace ais::engagement;

    // balloon virtual sphere: 211 mm within 1 mm of the closed form
    SizingScenario pop{0.5, 2.0 * std::cos(deg2rad(25.0)), 2.0 * std::sin(deg2rad(25.0)),
                       0.0, 0.15, GripMode::pop};
    const double r_pop = min_equivalent_radius(pop) * 1000.0;
    bool ok = std::abs(r_pop - 211.0) <= 1.0;

    // gripper radii are exact inversions of the sizing relations
    const double grab_grip = gripper_radius(0.085, 0.100, GripMode::grab).radius * 1000.0;
    const double pop_grip = gripper_radius(0.211, 0.150, GripMode::pop).radius * 1000.0;
    ok = ok && std::abs(grab_grip - 185.0) < 1e-9 && std::abs(pop_grip - 61.0) < 1e-9;

    // head-on case: computed value against an independent recomputation
    SizingScenario head{0.5, 9.96, 0.69, 0.0, 0.1, GripMode::grab};
    const double r_head = min_equivalent_radius(head) * 1000.0;
    const double recompute =
        1000.0 * 0.5 * std::sqrt((0.69 * 0.69) / (0.69 * 0.69 + 9.96 * 9.96));
    ok = ok && std::abs(r_head - 34.6) <= 0.5 && std::abs(r_head - recompute) < 1e-9;

    const double wall = now_s() - t0;
    ok = ok && wall < 1.0;
    report("sizing", ok,
           fmt("pop=%.1fmm grab_grip=%.0fmm pop_grip=%.0fmm head_on=%.2fmm wall=%.3fs",
               r_pop, grab_grip, pop_grip, r_head, wall));
}

// -------------------------------------------------------------- tracking ---
void criterion_tracking() {
    const double t0 = now_s();
    auto cfg = runner::default_scenario();
    cfg.world.target.speed = 4.0;
    cfg.tracking.d_track = 8.0;
    cfg.seed = 1;
    const auto r = runner::run_track_scenario(cfg, 120.0);
    const double wall = now_s() - t0;
    const bool ok = r.fraction_in_band >= 0.90 && r.fraction_yaw_ok >= 0.90 && wall < 30.0;
    report("tracking", ok,
           fmt("in_band=%.1f%% yaw_ok=%.1f%% (>=90%%) wall=%.1fs (<30s)",
               100.0 * r.fraction_in_band, 100.0 * r.fraction_yaw_ok, wall));
}

// -------------------------------------------------------------- grabbing ---
void criterion_grabbing() {
    const double t0 = now_s();
    auto cfg = runner::default_scenario();
    cfg.world.target.speed = 2.0;
    cfg.grab.v_target = 2.0;
    cfg.grab.v_excess = 0.5;

    std::vector<std::uint64_t> seeds(10);
    std::iota(seeds.begin(), seeds.end(), 1);

    cfg.world.sensing.sigma_px = 2.0;
    const auto noisy = runner::run_grab_sweep(cfg, seeds, 120.0, true);
    int noisy_ok = 0;
    for (const auto& r : noisy) noisy_ok += r.success;

    cfg.world.sensing.sigma_px = 0.0;
    cfg.world.sensing.dropout_prob = 0.0;
    const auto clean = runner::run_grab_sweep(cfg, seeds, 120.0, true);
    int clean_ok = 0;
    for (const auto& r : clean) clean_ok += r.success;

    const double wall = now_s() - t0;
    const bool ok = noisy_ok >= 8 && clean_ok == 10 && wall < 60.0;
    report("grabbing", ok,
           fmt("noisy=%d/10 (>=8) clean=%d/10 (=10) wall=%.1fs (<60s)", noisy_ok,
               clean_ok, wall));
}

// ---------------------------------------------------------- full mission ---
bool grabber_pattern_ok(const std::vector<oms::TaskKind>& seq, bool expect_grab) {
    // takeoff, explore_ball, then track/standby/grab phases, ending with land
    std::size_t i = 0;
    if (i >= seq.size() || seq[i] != oms::TaskKind::takeoff) return false;
    ++i;
    if (i >= seq.size() || seq[i] != oms::TaskKind::explore_ball) return false;
    ++i;
    bool saw_grab = false;
    for (; i < seq.size() && seq[i] != oms::TaskKind::land; ++i) {
        if (seq[i] != oms::TaskKind::track && seq[i] != oms::TaskKind::grab_standby &&
            seq[i] != oms::TaskKind::grab)
            return false;
        saw_grab |= seq[i] == oms::TaskKind::grab;
    }
    if (i >= seq.size()) return false; // must reach land
    return !expect_grab || saw_grab;
}

bool popper_pattern_ok(const std::vector<oms::TaskKind>& seq) {
    std::size_t i = 0;
    if (i >= seq.size() || seq[i] != oms::TaskKind::takeoff) return false;
    ++i;
    if (i >= seq.size() || seq[i] != oms::TaskKind::explore_balloon) return false;
    for (++i; i < seq.size() && seq[i] != oms::TaskKind::land; ++i)
        if (seq[i] != oms::TaskKind::pop && seq[i] != oms::TaskKind::explore_balloon)
            return false;
    return i < seq.size(); // reached land
}

void criterion_mission() {
    auto cfg = runner::default_scenario();
    cfg.seed = 1;
    const auto art = runner::run_mission(cfg);
    const auto& s = art.summary;

    // task sequences per agent, consecutive duplicates dropped
    std::map<int, std::vector<oms::TaskKind>> seq;
    for (const auto& sw : art.task_switches) {
        auto& v = seq[sw.agent_id];
        if (v.empty() || v.back() != sw.new_task) v.push_back(sw.new_task);
    }
    int grabs_in_pattern = 0;
    bool grabber_ok = true;
    for (int id : {1, 2}) {
        bool any_grab = false;
        for (auto k : seq[id]) any_grab |= k == oms::TaskKind::grab;
        grabs_in_pattern += any_grab;
        grabber_ok = grabber_ok && grabber_pattern_ok(seq[id], false);
    }
    const bool pattern_ok = grabber_ok && grabs_in_pattern >= 1 && popper_pattern_ok(seq[3]);

    const bool ok = s.grab_success && s.balloons_popped == 5 &&
                    s.sim_duration <= 900.0 + 1e-9 && s.fence_breaches == 0 &&
                    s.min_separation >= cfg.avoidance.safe_radius && pattern_ok &&
                    !s.aborted;
    report("full-mission", ok,
           fmt("grab=%d pops=%d/5 min_sep=%.2fm (>=%.1f) breaches=%d pattern=%s "
               "t=%.0fs",
               s.grab_success ? 1 : 0, s.balloons_popped, s.min_separation,
               cfg.avoidance.safe_radius, s.fence_breaches, pattern_ok ? "ok" : "BAD",
               s.sim_duration));
}

// --------------------------------------------------------- collision cone ---
void criterion_collision_cone() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> dist(0.5, 60.0), vel(-8.0, 8.0),
        radius(0.5, 5.0);
    int mismatches = 0;
    for (int i = 0; i < 100000; ++i) {
        safety::RelativeKinematics k;
        k.r0 = dist(rng);
        k.v_r0 = vel(rng);
        k.v_theta0 = vel(rng);
        k.v_phi0 = vel(rng);
        const double R = radius(rng);

        // independent closest-approach propagation
        const Vec3 d(k.r0, 0.0, 0.0);
        const Vec3 v(k.v_r0, k.v_theta0, k.v_phi0);
        bool oracle = false;
        if (d.dot(v) < 0.0) {
            const Vec3 closest = d - (d.dot(v) / v.squaredNorm()) * v;
            oracle = closest.norm() <= R;
        }
        mismatches += oracle != safety::in_collision_cone(k, R);
    }

    auto cfg = runner::default_scenario();
    const auto sweep = runner::run_avoid_sweep(cfg, 50, 2.0, 40.0, 1, 45.0, true);
    double min_sep = std::numeric_limits<double>::infinity();
    for (const auto& r : sweep) min_sep = std::min(min_sep, r.min_separation);

    const bool ok = mismatches == 0 && min_sep >= cfg.avoidance.safe_radius;
    report("collision-cone", ok,
           fmt("oracle_mismatches=%d/100000 closed_loop_min_sep=%.2fm (>=%.1f, 50 runs)",
               mismatches, min_sep, cfg.avoidance.safe_radius));
}

// -------------------------------------------------------------- quickhull ---
void criterion_quickhull() {
    // brute-force supporting-plane oracle
    const auto oracle_vertices = [](const std::vector<Vec3>& pts) {
        const int n = static_cast<int>(pts.size());
        std::set<int> verts;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    const Vec3 nrm = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
                    if (nrm.norm() < 1e-12) continue;
                    double lo = 0.0, hi = 0.0;
                    for (int m = 0; m < n; ++m) {
                        const double d = nrm.dot(pts[m] - pts[i]);
                        lo = std::min(lo, d);
                        hi = std::max(hi, d);
                    }
                    const double eps = 1e-9 * nrm.norm();
                    if (lo >= -eps || hi <= eps)
                        for (int m = 0; m < n; ++m)
                            if (std::abs(nrm.dot(pts[m] - pts[i])) <= eps) verts.insert(m);
                }
        return verts;
    };

    bool cube_ok = false;
    {
        std::vector<Vec3> cube;
        for (double x : {0.0, 1.0})
            for (double y : {0.0, 1.0})
                for (double z : {0.0, 1.0}) cube.emplace_back(x, y, z);
        const auto hull = safety::quickhull3(cube);
        cube_ok = hull.vertices.size() == 8 &&
                  std::abs(hull.volume() - 1.0) < 1e-12 && hull.faces.size() == 6;
    }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    int bad_instances = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const int n = 10 + static_cast<int>(rng() % 41);
        std::vector<Vec3> pts;
        for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
        const auto hull = safety::quickhull3(pts);
        const auto expect = oracle_vertices(pts);

        std::set<int> got;
        for (const auto& v : hull.vertices)
            for (int i = 0; i < n; ++i)
                if ((pts[i] - v).norm() < 1e-12) got.insert(i);

        bool contained = true;
        for (const auto& p : pts) contained = contained && hull.signed_distance(p) <= 1e-9;
        if (got != expect || !contained) ++bad_instances;
    }

    report("quickhull", bad_instances == 0 && cube_ok,
           fmt("oracle_mismatch_instances=%d/100 cube=%s", bad_instances,
               cube_ok ? "exact" : "BAD"));
}

// -------------------------------------------------------------- hungarian ---
void criterion_hungarian() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(trial % 4);
        Eigen::MatrixXd cost(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cost(i, j) = u(rng);

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double total = 0.0;
            for (int i = 0; i < n; ++i) total += cost(i, perm[i]);
            best = std::min(best, total);
        } while (std::next_permutation(perm.begin(), perm.end()));

        const auto rows = vision::solve_assignment(cost);
        if (std::abs(vision::assignment_cost(cost, rows) - best) > 1e-9) ++mismatches;
    }
    report("hungarian", mismatches == 0, fmt("mismatches=%d/1000 (n<=5)", mismatches));
}

// -------------------------------------------------------------------- ekf ---
void criterion_ekf() {
    const double f = 600.0, dt = 0.02, speed = 2.0, radius = 10.0;

    // noiseless: the estimate locks onto the truth
    estimation::EkfState s;
    s.curvature_center = Vec2::Zero();
    s.target_speed = speed;
    s.estimate = Vec2(radius + 2.0, 1.0);
    s.meas_noise = Eigen::Matrix2d::Identity() * 1e-12;
    double theta = 0.0;
    for (int k = 0; k < 400; ++k) {
        theta += speed * dt / radius;
        const Vec2 truth(radius * std::cos(theta), radius * std::sin(theta));
        s = estimation::ekf_step(s, {truth.x(), truth.y(), f}, f, dt);
    }
    const double final_err =
        (s.estimate - Vec2(radius * std::cos(theta), radius * std::sin(theta))).norm();

    // noisy Monte Carlo: beat the raw measurements
    const double sigma = 0.2;
    double filt_sq = 0.0, raw_sq = 0.0;
    long count = 0;
    for (unsigned seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed * 31 + 7);
        std::normal_distribution<double> noise(0.0, sigma);
        estimation::EkfState m;
        m.curvature_center = Vec2::Zero();
        m.target_speed = speed;
        m.estimate = Vec2(radius, 0.0);
        m.meas_noise = Eigen::Matrix2d::Identity() * (sigma * sigma);
        double th = 0.0;
        for (int k = 0; k < 200; ++k) {
            th += speed * dt / radius;
            const Vec2 truth(radius * std::cos(th), radius * std::sin(th));
            const Vec2 z = truth + Vec2(noise(rng), noise(rng));
            m = estimation::ekf_step(m, {z.x(), z.y(), f}, f, dt);
            if (k >= 50) {
                filt_sq += (m.estimate - truth).squaredNorm();
                raw_sq += (z - truth).squaredNorm();
                ++count;
            }
        }
    }
    const double filt_rmse = std::sqrt(filt_sq / count);
    const double raw_rmse = std::sqrt(raw_sq / count);

    const bool ok = final_err < 1e-3 && filt_rmse < raw_rmse;
    report("ekf", ok,
           fmt("noiseless_err=%.2e (<1e-3) rmse=%.3fm raw=%.3fm (filtered < raw, 100 seeds)",
               final_err, filt_rmse, raw_rmse));
}

// -------------------------------------------------------------- curve fit ---
void criterion_curve_fit() {
    std::vector<Vec3> pts;
    const double a = 10.0, b = 5.0, yaw = deg2rad(18.0);
    const Vec3 center(3.0, -2.0, 9.0);
    for (int i = 0; i < 150; ++i) {
        const double t = 2.0 * kPi * i / 150;
        const double x = a * std::sin(t), y = b * std::sin(t) * std::cos(t);
        pts.emplace_back(center.x() + std::cos(yaw) * x - std::sin(yaw) * y,
                         center.y() + std::sin(yaw) * x + std::cos(yaw) * y, center.z());
    }
    const auto fit = estimation::fit_curve(pts);
    const bool ok = fit.converged && std::abs(fit.semi_axis_a - a) / a <= 0.01 &&
                    std::abs(fit.semi_axis_b - b) / b <= 0.01 &&
                    std::abs(wrap_angle(fit.orientation - yaw)) <= 0.01 * kPi &&
                    (fit.center.head<2>() - center.head<2>()).norm() <= 0.01 * a &&
                    fit.residual_rms < 1e-6;
    report("curve-fit", ok,
           fmt("A=%.4f B=%.4f yaw=%.2fdeg rms=%.1e (params within 1%%, rms<1e-6)",
               fit.semi_axis_a, fit.semi_axis_b, rad2deg(fit.orientation),
               fit.residual_rms));
}

// ------------------------------------------------------------ determinism ---
void criterion_determinism() {
    auto cfg = runner::default_scenario();
    cfg.seed = 7;
    cfg.duration = 900.0;
    const auto a = runner::run_mission(cfg);
    const auto b = runner::run_mission(cfg);

    bool identical = a.telemetry_csv.size() == b.telemetry_csv.size();
    for (const auto& [id, csv] : a.telemetry_csv)
        identical = identical && b.telemetry_csv.count(id) &&
                    b.telemetry_csv.at(id) == csv;
    identical = identical && a.events_csv == b.events_csv;
    report("determinism", identical,
           fmt("two seed-7 missions byte-identical=%s (%zu telemetry files)",
               identical ? "yes" : "NO", a.telemetry_csv.size()));
}

}  // namespace

int main() {
    const double t0 = now_s();
    criterion_sizing();
    criterion_tracking();
    criterion_grabbing();
    criterion_mission();
    criterion_collision_cone();
    criterion_quickhull();
    criterion_hungarian();
    criterion_ekf();
    criterion_curve_fit();
    criterion_determinism();
    std::printf("%d/10 criteria passed (%.1fs total)\n", 10 - g_failures, now_s() - t0);
    return g_failures == 0 ? 0 : 1;
}
