#pragma once

#include <memory>
#include <string>

#include "ais/runner/agent.hpp"
#include "ais/runner/scenario.hpp"

namespace ais::runner {

struct MissionSummary {
    bool grab_success = false;
    double grab_time = -1.0;
    int balloons_popped = 0;
    double min_separation = std::numeric_limits<double>::infinity();
    int fence_breaches = 0;
    double sim_duration = 0.0;
    double wall_seconds = 0.0;
    bool aborted = false;
};

struct MissionArtifacts {
    MissionSummary summary;
    std::vector<oms::TaskSwitch> task_switches;
    // per-agent telemetry kept in memory as CSV text; written by the CLI
    std::map<int, std::string> telemetry_csv;
    std::string events_csv;
};

/// Full deterministic tick loop: bus, master allocation, agent execution,
/// world stepping, and telemetry capture.
MissionArtifacts run_mission(const ScenarioConfig& cfg);

/// Write artifacts into a directory (telemetry CSVs, task-switch log,
/// events log, summary JSON).
void write_artifacts(const MissionArtifacts& art, const ScenarioConfig& cfg,
                     const std::string& out_dir);

}  // namespace ais::runner
