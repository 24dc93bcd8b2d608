#pragma once

#include <span>

#include "ais/core/types.hpp"

namespace ais::estimation {

/// Planar target-position EKF.  The motion model points toward the path's
/// curvature center at the known target speed, the measurement is the target
/// position recovered from centered pixels and depth.
struct EkfState {
    Vec2 estimate = Vec2::Zero();       // m
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
    Vec2 curvature_center = Vec2::Zero(); // m
    double target_speed = 0.0;            // m/s
    Eigen::Matrix2d process_noise = Eigen::Matrix2d::Identity() * 0.05; // per step
    Eigen::Matrix2d meas_noise = Eigen::Matrix2d::Identity() * 0.04;
};

/// Pixel-plus-depth measurement (p_x, p_y centered, Z along the optical axis).
struct PixelDepthMeasurement {
    double p_x = 0.0;
    double p_y = 0.0;
    double depth = 0.0;
};

/// Measurement noise from first-order propagation of pixel noise through
/// z = p * Z / f.
Eigen::Matrix2d meas_noise_from_pixels(double sigma_px, double depth, double f);

/// One predict-update cycle.  Throws DegenerateError when the estimate sits
/// on the curvature center (the radial dynamics lose their direction there).
EkfState ekf_step(const EkfState& s, const PixelDepthMeasurement& meas, double f, double dt);

struct Prediction {
    int horizon = 0;             // m steps ahead
    int window = 0;              // n observations used
    Vec2 delta = Vec2::Zero();   // m
    Vec2 predicted = Vec2::Zero(); // m
};

/// m-step lookahead: m times the mean per-step displacement over the window.
/// Throws if fewer than two points are supplied.
Prediction predict_ahead(std::span<const Vec2> history, int m);

/// Plot-friendly export row: t, estimate x/y, altitude, covariance trace.
std::string estimate_csv_row(double t, const EkfState& s, double altitude);
inline const char* estimate_csv_header() { return "t,tx_hat,ty_hat,tz_hat,cov_trace\n"; }

}  // namespace ais::estimation
