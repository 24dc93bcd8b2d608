#include "ais/estimation/target_ekf.hpp"

namespace ais::estimation {

Eigen::Matrix2d meas_noise_from_pixels(double sigma_px, double depth, double f) {
    const double s = sigma_px * depth / f;
    const double var = std::max(s * s, 1e-12);
    return Eigen::Matrix2d::Identity() * var;
}

EkfState ekf_step(const EkfState& s, const PixelDepthMeasurement& meas, double f, double dt) {
    const Vec2 d = s.estimate - s.curvature_center;
    const double r = d.norm();
    if (r < 1e-6)
        throw DegenerateError("ekf_step: estimate at the curvature center");

    // dynamics: xdot = -V_T * (x - x0) / |x - x0|, forward Euler
    const Vec2 u = d / r;
    EkfState out = s;
    out.estimate = s.estimate - dt * s.target_speed * u;

    // Jacobian of the radial field: -(V_T/r) (I - u u^T)
    const Eigen::Matrix2d j =
        -(s.target_speed / r) * (Eigen::Matrix2d::Identity() - u * u.transpose());
    const Eigen::Matrix2d F = Eigen::Matrix2d::Identity() + dt * j;
    out.covariance = F * s.covariance * F.transpose() + s.process_noise;

    const Vec2 z(meas.p_x * meas.depth / f, meas.p_y * meas.depth / f);
    const Eigen::Matrix2d innov_cov = out.covariance + s.meas_noise; // H = I
    const Eigen::Matrix2d gain = out.covariance * innov_cov.inverse();
    out.estimate += gain * (z - out.estimate);
    out.covariance = (Eigen::Matrix2d::Identity() - gain) * out.covariance;
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    return out;
}

std::string estimate_csv_row(double t, const EkfState& s, double altitude) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.3f,%.6f,%.6f,%.6f,%.8f\n", t, s.estimate.x(),
                  s.estimate.y(), altitude, s.covariance.trace());
    return buf;
}

Prediction predict_ahead(std::span<const Vec2> history, int m) {
    if (history.size() < 2)
        throw Error("predict_ahead: need at least two observations");
    Prediction p;
    p.horizon = m;
    p.window = static_cast<int>(history.size());
    const Vec2 mean_step =
        (history.back() - history.front()) / static_cast<double>(history.size() - 1);
    p.delta = m * mean_step;
    p.predicted = history.back() + p.delta;
    return p;
}

}  // namespace ais::estimation
