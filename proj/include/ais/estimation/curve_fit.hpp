#pragma once

#include <span>

#include "ais/core/types.hpp"
#include "ais/safety/quickhull.hpp"

namespace ais::estimation {

/// Gerono lemniscate under a planar rotation + translation:
///   p(t) = center + Rz(orientation) * (A sin t, B sin t cos t, 0)
struct CurveFit {
    Vec3 center = Vec3::Zero();   // (cx, cy, mean altitude)
    double orientation = 0.0;     // rad, normalized to [-pi/2, pi/2)
    double semi_axis_a = 0.0;     // m
    double semi_axis_b = 0.0;     // m
    double residual_rms = 0.0;    // m
    bool converged = false;
    int iterations = 0;

    /// Curve point at parameter t, world frame.
    Vec3 point(double t) const;
    /// Unit tangent at t (horizontal).
    Vec3 tangent(double t) const;
};

/// Nonlinear least squares over (cx, cy, orientation, A, B) with per-point
/// nearest-parameter association; Gauss-Newton with Levenberg damping,
/// iteration cap 100, convergence on step norm < 1e-8.  PCA initial guess.
/// Throws when fewer than 20 points are supplied.
CurveFit fit_curve(std::span<const Vec3> points);

/// Where non-convergence or model mismatch is a soft failure, reject fits
/// whose residual exceeds this fraction of the major semi-axis.
bool fit_acceptable(const CurveFit& fit, double rel_residual_max = 0.02);

/// Waiting point for a head-on grab: laterally offset from the fitted
/// curve's lowest-curvature segment (the sweep through the self-intersection)
/// at the fitted altitude.  Throws when no candidate lies inside the fence.
Vec3 standoff_point(const CurveFit& fit, const safety::FenceHull& arena,
                    double lateral_offset = 2.0);

}  // namespace ais::estimation
