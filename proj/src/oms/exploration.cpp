#include "ais/oms/exploration.hpp"

#include <algorithm>

namespace ais::oms {

std::vector<Waypoint> exploration_waypoints(ExploreKind kind,
                                            const safety::FenceHull& arena,
                                            const ExplorationConfig& cfg) {
    Vec3 lo = arena.vertices.front(), hi = arena.vertices.front();
    for (const auto& v : arena.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const double x0 = lo.x() + cfg.margin, x1 = hi.x() - cfg.margin;
    const double y0 = lo.y() + cfg.margin, y1 = hi.y() - cfg.margin;
    const Vec3 centroid = arena.centroid();

    std::vector<Waypoint> wps;
    if (kind == ExploreKind::balloon) {
        // serpentine rows along x, stepping in y
        bool forward = true;
        for (double y = y0; y <= y1 + 1e-9; y += cfg.grid_spacing) {
            Waypoint a, b;
            a.position = Vec3(forward ? x0 : x1, y, cfg.altitude);
            b.position = Vec3(forward ? x1 : x0, y, cfg.altitude);
            wps.push_back(a);
            wps.push_back(b);
            forward = !forward;
        }
        return wps;
    }

    // ball sweep: shuttle along x at a fixed y, camera facing the interior
    const double y = std::clamp(centroid.y() + cfg.sweep_offset, y0, y1);
    const double toward_inside = centroid.y() >= y ? kPi / 2.0 : -kPi / 2.0;
    Waypoint a, b;
    a.position = Vec3(x0, y, cfg.altitude);
    a.heading = toward_inside; // perpendicular to the +/-x path
    a.heading_fixed = true;
    b.position = Vec3(x1, y, cfg.altitude);
    b.heading = toward_inside;
    b.heading_fixed = true;
    return {a, b};
}

}  // namespace ais::oms
