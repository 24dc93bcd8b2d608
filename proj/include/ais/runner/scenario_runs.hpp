#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ais/runner/scenario.hpp"

namespace ais::runner {

/// Data behind the single-algorithm validation figures: one sample per tick.
struct TraceSample {
    double t = 0.0;
    double distance = 0.0;   // m, camera center to ball (or pair separation)
    double yaw_offset = 0.0; // rad
    Vec3 cmd_velocity = Vec3::Zero();
    double cmd_yaw_rate = 0.0;
};

struct TrackResult {
    std::vector<TraceSample> trace;
    double fraction_in_band = 0.0;  // |distance - d_track| <= 1.5 m, post transient
    double fraction_yaw_ok = 0.0;   // |yaw offset| <= 10 deg, post transient
    double transient_s = 20.0;
};

TrackResult run_track_scenario(const ScenarioConfig& cfg, double duration_s);

struct GrabResult {
    std::vector<TraceSample> trace;
    bool success = false;
    double grab_time = -1.0;
    double final_distance = 0.0;
};

GrabResult run_grab_scenario(const ScenarioConfig& cfg, double duration_s);

/// Seed sweep for the grab engagement; OpenMP across seeds when parallel.
std::vector<GrabResult> run_grab_sweep(const ScenarioConfig& base,
                                       const std::vector<std::uint64_t>& seeds,
                                       double duration_s, bool parallel);

struct PopResult {
    int pops = 0;
    bool mission_done = false;
    double elapsed = 0.0;
};

PopResult run_pop_scenario(const ScenarioConfig& cfg, double duration_s);

struct AvoidResult {
    std::vector<TraceSample> trace; // distance = pair separation
    double min_separation = 0.0;
};

/// Head-on pair with a seeded lateral/vertical offset; both maneuver.
AvoidResult run_avoid_scenario(const ScenarioConfig& cfg, double approach_speed,
                               double start_distance, std::uint64_t seed,
                               double duration_s);

std::vector<AvoidResult> run_avoid_sweep(const ScenarioConfig& base, int count,
                                         double approach_speed, double start_distance,
                                         std::uint64_t base_seed, double duration_s,
                                         bool parallel);

struct FenceResult {
    std::vector<TraceSample> trace; // distance = signed distance to the hull
    int breaches = 0;
    double max_signed_distance = -std::numeric_limits<double>::infinity();
};

FenceResult run_fence_scenario(const ScenarioConfig& cfg, double duration_s);

void write_trace_csv(const std::vector<TraceSample>& trace, const std::string& path);

}  // namespace ais::runner
