#pragma once

#include <optional>

#include "ais/core/types.hpp"

namespace ais::core {

/// Shift image coordinates so the optical axis is at (0, 0).
inline Vec2 center_pixels(const PixelObservation& obs, const CameraIntrinsics& cam) {
    return {obs.t_x - cam.w / 2.0, obs.t_y - cam.h / 2.0};
}

/// Unit vector from the camera center through the centered pixel (p_x, p_y).
inline Vec3 los_unit_vector(double p_x, double p_y, double f) {
    const double n = std::sqrt(p_x * p_x + p_y * p_y + f * f);
    return {p_x / n, p_y / n, f / n};
}

/// Project a camera-frame point onto the image.  Returns nullopt when the
/// pixel falls outside [0,w]x[0,h].  `object_radius` sets the apparent
/// radius for a sphere of that physical size.
inline std::optional<PixelObservation> project(const Vec3& point_cam,
                                               const CameraIntrinsics& cam,
                                               double object_radius = 0.0,
                                               double t = 0.0) {
    if (point_cam.z() <= 0.0)
        throw BehindCameraError("project: non-positive depth");
    PixelObservation obs;
    obs.t_x = cam.w / 2.0 + cam.f * point_cam.x() / point_cam.z();
    obs.t_y = cam.h / 2.0 + cam.f * point_cam.y() / point_cam.z();
    obs.apparent_radius = cam.f * object_radius / point_cam.z();
    obs.t = t;
    if (obs.t_x < 0.0 || obs.t_x > cam.w || obs.t_y < 0.0 || obs.t_y > cam.h)
        return std::nullopt;
    return obs;
}

/// Depth of a sphere of known radius from its apparent radius in pixels.
inline double depth_from_size(double apparent_radius, double object_radius, double f) {
    if (apparent_radius <= 0.0)
        throw DegenerateError("depth_from_size: zero apparent radius");
    return f * object_radius / apparent_radius;
}

/// Rotate a camera-frame vector into the world frame: R_b2i * R_c2b * v.
inline Vec3 camera_to_world(const Vec3& v_cam, const RotationMatrix& cam_to_body,
                            const RotationMatrix& body_to_world) {
    return body_to_world * (cam_to_body * v_cam);
}

/// World position of the camera center for a vehicle with the given mount.
inline Vec3 camera_position(const VehicleState& state, const CameraMount& mount) {
    return state.position + state.body_to_world() * mount.offset_body;
}

/// Express a world point in the camera frame of the given vehicle/mount.
inline Vec3 world_to_camera(const Vec3& p_world, const VehicleState& state,
                            const CameraMount& mount) {
    const Mat3 r_c2i =
        state.body_to_world().matrix() * mount.cam_to_body.matrix();
    return r_c2i.transpose() * (p_world - camera_position(state, mount));
}

}  // namespace ais::core
