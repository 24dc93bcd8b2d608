#pragma once

#include <optional>

#include "ais/core/camera.hpp"
#include "ais/core/types.hpp"

namespace ais::vision {

/// Geometry of one segmented blob, in pixels.
struct ContourStats {
    double area = 0.0;               // px^2
    double perimeter = 0.0;          // px
    Vec2 center = Vec2::Zero();      // px, image coordinates
    double enclosing_radius = 0.0;   // px, smallest enclosing circle
    double distance_below_uav = 0.0; // px, contour center to UAV box bottom
};

/// Known ball geometry used by the search-phase score.
struct BallSearchConfig {
    double ball_radius = 0.05;    // m
    double rod_length = 1.45;     // m
    double rod_tolerance = 40.0;  // px, tolerance on the rod-length mismatch
};

/// 4*pi*Area / Perimeter^2.  Near 1 for circles; can exceed 1 on rasterized
/// contours.
inline double circularity(const ContourStats& c) {
    if (c.perimeter <= 0.0)
        throw DegenerateError("circularity: zero perimeter");
    return 4.0 * kPi * c.area / (c.perimeter * c.perimeter);
}

/// Search-phase score: circularity when the observed rod length matches the
/// length expected from the contour size, -1 otherwise.
inline double score(const ContourStats& c, const BallSearchConfig& cfg) {
    const double expected_rod = cfg.rod_length * c.enclosing_radius / cfg.ball_radius;
    if (std::abs(c.distance_below_uav - expected_rod) <= cfg.rod_tolerance)
        return circularity(c);
    return -1.0;
}

/// Region of interest for the next frame's ball search.
struct SearchRegion {
    enum class Kind { wedge, square };
    Kind kind = Kind::wedge;
    Vec2 center = Vec2::Zero(); // px
    double offset_below = 0.0;  // px, wedge anchor below the UAV box bottom
    double half_width = 0.0;    // px

    bool contains(const Vec2& p) const {
        return std::abs(p.x() - center.x()) <= half_width &&
               std::abs(p.y() - center.y()) <= half_width;
    }
};

/// Tracking-phase wedge below a UAV box: the anchor offset is the suspension
/// rod projected at the previous frame's depth, the width scales with the
/// previous apparent radius.
inline SearchRegion wedge_region(const Vec2& box_bottom_center, double prev_depth,
                                 double prev_radius, const BallSearchConfig& cfg,
                                 const CameraIntrinsics& cam) {
    SearchRegion r;
    r.kind = SearchRegion::Kind::wedge;
    r.offset_below = cfg.rod_length * cam.f / prev_depth;
    r.half_width = 4.0 * prev_radius;
    r.center = box_bottom_center + Vec2(0.0, r.offset_below);
    return r;
}

/// Grab-phase square around the ball's predicted position.
inline SearchRegion square_region(const Vec2& predicted_center, double prev_radius) {
    SearchRegion r;
    r.kind = SearchRegion::Kind::square;
    r.center = predicted_center;
    r.half_width = 4.0 * prev_radius;
    r.offset_below = 0.0;
    return r;
}

inline constexpr double kBalloonCircularityMin = 0.75;

/// World position of a spherical balloon from its blob.  Depth comes from the
/// known radius; the LOS ray is scaled so the recovered point's z-depth in the
/// camera frame matches that depth.  Returns nullopt for blobs that fail the
/// circularity gate.
inline std::optional<Vec3> balloon_position(const ContourStats& blob, double balloon_radius,
                                            const CameraIntrinsics& cam,
                                            const VehicleState& state,
                                            const CameraMount& mount) {
    if (circularity(blob) < kBalloonCircularityMin)
        return std::nullopt;
    const double depth = core::depth_from_size(blob.enclosing_radius, balloon_radius, cam.f);
    PixelObservation obs;
    obs.t_x = blob.center.x();
    obs.t_y = blob.center.y();
    const Vec2 p = core::center_pixels(obs, cam);
    const Vec3 los = core::los_unit_vector(p.x(), p.y(), cam.f);
    const double slant = depth / los.z(); // los.z = f/norm > 0
    const Vec3 v_world = core::camera_to_world(los * slant, mount.cam_to_body, state.body_to_world());
    return core::camera_position(state, mount) + v_world;
}

}  // namespace ais::vision
