#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ais {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

// Platform speed cap, 30 km/h.
inline constexpr double kMaxSpeedMps = 30.0 / 3.6;

inline constexpr double kPi = std::numbers::pi;

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    double w = std::fmod(a + kPi, 2.0 * kPi);
    if (w <= 0.0) w += 2.0 * kPi;
    return w - kPi;
}

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateError : Error {
    using Error::Error;
};

struct BehindCameraError : Error {
    using Error::Error;
};

/// 3x3 rotation, stored column-major.  Construction checks orthonormality
/// and det = +1 within 1e-9.
class RotationMatrix {
  public:
    RotationMatrix() : m_(Mat3::Identity()) {}

    explicit RotationMatrix(const Mat3& m) : m_(m) {
        if ((m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
            throw Error("RotationMatrix: not orthonormal");
        if (std::abs(m.determinant() - 1.0) > 1e-9)
            throw Error("RotationMatrix: det != +1");
    }

    /// Z-Y-X intrinsic Euler angles (yaw about z, then pitch, then roll).
    static RotationMatrix from_yaw_pitch_roll(double yaw, double pitch, double roll) {
        Mat3 m = (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                  Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                  Eigen::AngleAxisd(roll, Vec3::UnitX()))
                     .toRotationMatrix();
        RotationMatrix r;
        r.m_ = m;
        return r;
    }

    static RotationMatrix identity() { return RotationMatrix(); }

    const Mat3& matrix() const { return m_; }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    RotationMatrix compose(const RotationMatrix& rhs) const {
        RotationMatrix r;
        r.m_ = m_ * rhs.m_;
        return r;
    }

  private:
    Mat3 m_;
};

/// Pinhole camera: focal length and image size, all in pixels.
struct CameraIntrinsics {
    double f = 600.0;
    double w = 1280.0;
    double h = 720.0;
};

/// One UAV in the world frame (x east, y north, z up).
struct VehicleState {
    Vec3 position = Vec3::Zero();   // m
    Vec3 velocity = Vec3::Zero();   // m/s
    double yaw = 0.0;               // rad, (-pi, pi]
    double yaw_rate = 0.0;          // rad/s
    double roll = 0.0;              // rad
    double pitch = 0.0;             // rad

    RotationMatrix body_to_world() const {
        return RotationMatrix::from_yaw_pitch_roll(yaw, pitch, roll);
    }
};

/// Target center in image coordinates plus apparent radius.
struct PixelObservation {
    double t_x = 0.0;             // px, origin at image top-left
    double t_y = 0.0;             // px
    double apparent_radius = 0.0; // px
    double t = 0.0;               // s
};

/// Camera mount: camera frame is z along the optical axis, x right,
/// y down in the image.  The default mount looks along body +x with the
/// lens at the end-effector, 0.6 m to the body-right of the UAV center.
struct CameraMount {
    RotationMatrix cam_to_body;
    Vec3 offset_body = Vec3(0.0, -0.6, 0.0); // m

    static CameraMount forward() {
        Mat3 m;
        // cam x -> body -y, cam y -> body -z, cam z -> body +x
        m << 0, 0, 1,
            -1, 0, 0,
             0, -1, 0;
        CameraMount c;
        c.cam_to_body = RotationMatrix(m);
        return c;
    }
};

}  // namespace ais
