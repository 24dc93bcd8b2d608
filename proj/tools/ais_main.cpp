#include <CLI11.hpp>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "ais/engagement/sizing.hpp"
#include "ais/runner/mission.hpp"
#include "ais/runner/scenario_runs.hpp"

namespace {

bool log_enabled() {
    const char* v = std::getenv("AIS_LOG");
    return v && std::string(v) != "" && std::string(v) != "0";
}

void logf(const char* fmt, ...) {
    if (!log_enabled()) return;
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

ais::runner::ScenarioConfig load_or_default(const std::string& path) {
    if (path.empty()) return ais::runner::default_scenario();
    return ais::runner::load_scenario(path);
}

void print_sizing(const ais::engagement::SizingScenario& s) {
    using namespace ais::engagement;
    const double r_eq = min_equivalent_radius(s);
    const auto grip = gripper_radius(r_eq, s.object_radius, s.mode);
    std::printf("%-28s %10.1f mm\n", "minimum equivalent radius", r_eq * 1000.0);
    std::printf("%-28s %10.1f mm%s\n",
                s.mode == GripMode::grab ? "gripper radius (grab)" : "gripper radius (pop)",
                grip.radius * 1000.0, grip.nominal_contact ? "  (nominal contact)" : "");
    std::printf("%-28s %10.1f mm\n", "chosen design value",
                (s.mode == GripMode::grab ? kDesignGrabGripperRadius
                                          : kDesignPopGripperRadius) *
                    1000.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-UAV ball-grabbing / balloon-popping engagement simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    double duration = -1.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario JSON path");
        cmd->add_option("--seed", seed, "override the scenario seed");
        cmd->add_option("--duration-s", duration, "override the run duration");
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* mission = app.add_subcommand("mission", "run the full 3-UAV mission");
    add_common(mission);

    auto* scenario =
        app.add_subcommand("scenario", "run one isolated algorithm scenario");
    std::string kind;
    scenario->add_option("kind", kind, "track | grab | pop | avoid | fence")->required();
    add_common(scenario);

    auto* size = app.add_subcommand("size", "gripper sizing analysis");
    ais::engagement::SizingScenario sz;
    std::string mode = "grab";
    size->add_option("--r0", sz.r0, "initial distance m");
    size->add_option("--vr", sz.v_r0, "LOS-rate component m/s");
    size->add_option("--vtheta", sz.v_theta0, "transverse component m/s");
    size->add_option("--vphi", sz.v_phi0, "transverse component m/s");
    size->add_option("--object-radius", sz.object_radius, "ball/balloon radius m");
    size->add_option("--mode", mode, "grab | pop");

    CLI11_PARSE(app, argc, argv);

    try {
        if (size->parsed()) {
            if (size->count("--r0") || size->count("--vr") || size->count("--vtheta") ||
                size->count("--vphi")) {
                sz.mode = mode == "pop" ? ais::engagement::GripMode::pop
                                        : ais::engagement::GripMode::grab;
                print_sizing(sz);
                std::printf("\n");
            }
            // reference engagements: grabbing head-on, and the balloon pop
            std::printf("reference: ball grab, head-on terminal phase\n");
            ais::engagement::SizingScenario head_on{0.5, 9.96, 0.69, 0.0, 0.1,
                                                    ais::engagement::GripMode::grab};
            print_sizing(head_on);
            std::printf("  (tail-chase analysis in the reference design: R_eq 85 mm"
                        " -> gripper 185 mm)\n\n");
            std::printf("reference: balloon pop, 2 m/s at 25 deg misalignment\n");
            ais::engagement::SizingScenario pop{0.5, 2.0 * std::cos(ais::deg2rad(25.0)),
                                                2.0 * std::sin(ais::deg2rad(25.0)), 0.0,
                                                0.15, ais::engagement::GripMode::pop};
            print_sizing(pop);
            return 0;
        }

        ais::runner::ScenarioConfig cfg = load_or_default(scenario_path);
        if (seed != 0) cfg.seed = seed;
        if (duration > 0.0) cfg.duration = duration;

        if (mission->parsed()) {
            logf("mission: seed=%llu duration=%.1fs",
                 static_cast<unsigned long long>(cfg.seed), cfg.duration);
            const auto art = ais::runner::run_mission(cfg);
            ais::runner::write_artifacts(art, cfg, out_dir);
            std::printf("grab=%s balloons=%d min_separation=%.2fm breaches=%d "
                        "sim=%.1fs wall=%.1fs\n",
                        art.summary.grab_success ? "true" : "false",
                        art.summary.balloons_popped, art.summary.min_separation,
                        art.summary.fence_breaches, art.summary.sim_duration,
                        art.summary.wall_seconds);
            return art.summary.aborted ? 1 : 0;
        }

        if (scenario->parsed()) {
            namespace fs = std::filesystem;
            fs::create_directories(out_dir);
            const double dur = cfg.duration > 0.0 && duration > 0.0 ? duration : 120.0;
            if (kind == "track") {
                cfg.world.target.speed = cfg.world.target.speed;
                const auto r = ais::runner::run_track_scenario(cfg, dur);
                ais::runner::write_trace_csv(r.trace, out_dir + "/track_trace.csv");
                std::printf("in_band=%.1f%% yaw_ok=%.1f%%\n", 100.0 * r.fraction_in_band,
                            100.0 * r.fraction_yaw_ok);
            } else if (kind == "grab") {
                const auto r = ais::runner::run_grab_scenario(cfg, dur);
                ais::runner::write_trace_csv(r.trace, out_dir + "/grab_trace.csv");
                std::printf("grab=%s t=%.2fs final_los=%.3fm\n",
                            r.success ? "true" : "false", r.grab_time, r.final_distance);
            } else if (kind == "pop") {
                const auto r = ais::runner::run_pop_scenario(cfg, std::max(dur, 600.0));
                std::printf("pops=%d done=%s t=%.1fs\n", r.pops,
                            r.mission_done ? "true" : "false", r.elapsed);
            } else if (kind == "avoid") {
                const auto r = ais::runner::run_avoid_scenario(cfg, 2.0, 40.0, cfg.seed, 60.0);
                ais::runner::write_trace_csv(r.trace, out_dir + "/avoid_trace.csv");
                std::printf("min_separation=%.3fm\n", r.min_separation);
            } else if (kind == "fence") {
                const auto r = ais::runner::run_fence_scenario(cfg, std::max(dur, 60.0));
                ais::runner::write_trace_csv(r.trace, out_dir + "/fence_trace.csv");
                std::printf("breaches=%d max_signed_distance=%.3fm\n", r.breaches,
                            r.max_signed_distance);
            } else {
                std::fprintf(stderr, "unknown scenario kind: %s\n", kind.c_str());
                return 2;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
