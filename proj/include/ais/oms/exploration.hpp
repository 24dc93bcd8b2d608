#pragma once

#include <vector>

#include "ais/safety/quickhull.hpp"

namespace ais::oms {

enum class ExploreKind { ball, balloon };

struct Waypoint {
    Vec3 position = Vec3::Zero();
    double heading = 0.0;      // rad, used when heading_fixed
    bool heading_fixed = false; // otherwise face the next waypoint
};

struct ExplorationConfig {
    double altitude = 10.0;     // m
    double grid_spacing = 12.0; // m, lawn-mower row pitch
    double margin = 5.0;        // m inset from the fence (>= fence activation)
    double sweep_offset = 0.0;  // m, lateral offset of the ball sweep line
};

/// Waypoints for the two exploration patterns: a serpentine lawn-mower grid
/// for balloon search (heading along the path), or a two-point horizontal
/// sweep for ball search with the camera held perpendicular to the path,
/// facing the arena interior.
std::vector<Waypoint> exploration_waypoints(ExploreKind kind,
                                            const safety::FenceHull& arena,
                                            const ExplorationConfig& cfg);

}  // namespace ais::oms
