#include "ais/estimation/curve_fit.hpp"

#include <Eigen/Eigenvalues>

namespace ais::estimation {

namespace {

Eigen::Matrix2d rot2(double a) {
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

Vec2 gerono(double t, double a, double b) {
    return {a * std::sin(t), b * std::sin(t) * std::cos(t)};
}

Vec2 gerono_dt(double t, double a, double b) {
    return {a * std::cos(t), b * std::cos(2.0 * t)};
}

Vec2 gerono_dtt(double t, double a, double b) {
    return {-a * std::sin(t), -2.0 * b * std::sin(2.0 * t)};
}

// Parameter of the curve point nearest to p_local: coarse grid + Newton.
double nearest_t(const Vec2& p, double a, double b) {
    constexpr int grid = 256;
    double best_t = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const double t = 2.0 * kPi * i / grid;
        const double d = (p - gerono(t, a, b)).squaredNorm();
        if (d < best_d) { best_d = d; best_t = t; }
    }
    double t = best_t;
    for (int it = 0; it < 12; ++it) {
        const Vec2 f = gerono(t, a, b);
        const Vec2 f1 = gerono_dt(t, a, b);
        const Vec2 f2 = gerono_dtt(t, a, b);
        const Vec2 e = p - f;
        const double g1 = -2.0 * e.dot(f1);
        const double g2 = 2.0 * (f1.dot(f1) - e.dot(f2));
        if (std::abs(g2) < 1e-14) break;
        const double step = g1 / g2;
        t -= step;
        if (std::abs(step) < 1e-13) break;
    }
    return t;
}

struct Params {
    double cx, cy, theta, a, b;
};

double cost_of(const Params& q, std::span<const Vec3> pts, std::vector<double>& ts) {
    const Eigen::Matrix2d r = rot2(q.theta);
    const Eigen::Matrix2d rt = r.transpose();
    double ssq = 0.0;
    ts.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2 local = rt * (Vec2(pts[i].x(), pts[i].y()) - Vec2(q.cx, q.cy));
        ts[i] = nearest_t(local, q.a, q.b);
        ssq += (local - gerono(ts[i], q.a, q.b)).squaredNorm();
    }
    return ssq;
}

}  // namespace

Vec3 CurveFit::point(double t) const {
    const Vec2 local = gerono(t, semi_axis_a, semi_axis_b);
    const Vec2 world = rot2(orientation) * local;
    return {center.x() + world.x(), center.y() + world.y(), center.z()};
}

Vec3 CurveFit::tangent(double t) const {
    const Vec2 d = rot2(orientation) * gerono_dt(t, semi_axis_a, semi_axis_b);
    const double n = d.norm();
    if (n < 1e-12) return Vec3::UnitX();
    return {d.x() / n, d.y() / n, 0.0};
}

CurveFit fit_curve(std::span<const Vec3> points) {
    if (points.size() < 20)
        throw Error("fit_curve: need at least 20 points spanning a loop");

    // PCA initial guess
    Vec2 mean = Vec2::Zero();
    double mean_z = 0.0;
    for (const auto& p : points) {
        mean += Vec2(p.x(), p.y());
        mean_z += p.z();
    }
    mean /= static_cast<double>(points.size());
    mean_z /= static_cast<double>(points.size());

    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : points) {
        const Vec2 d = Vec2(p.x(), p.y()) - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(points.size());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    const Vec2 axis = eig.eigenvectors().col(1); // largest eigenvalue
    Params q{mean.x(), mean.y(), std::atan2(axis.y(), axis.x()),
             2.0 * std::sqrt(eig.eigenvalues()(1)), 2.0 * std::sqrt(eig.eigenvalues()(0))};

    std::vector<double> ts;
    double cost = cost_of(q, points, ts);
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;

    for (; iter < 100; ++iter) {
        const Eigen::Matrix2d r = rot2(q.theta);
        Eigen::Matrix2d dr;
        dr << -std::sin(q.theta), -std::cos(q.theta), std::cos(q.theta),
            -std::sin(q.theta);

        Eigen::Matrix<double, 5, 5> jtj = Eigen::Matrix<double, 5, 5>::Zero();
        Eigen::Matrix<double, 5, 1> jtr = Eigen::Matrix<double, 5, 1>::Zero();
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Vec2 f = gerono(ts[i], q.a, q.b);
            const Vec2 model = Vec2(q.cx, q.cy) + r * f;
            const Vec2 resid = Vec2(points[i].x(), points[i].y()) - model;

            Eigen::Matrix<double, 2, 5> jac; // d model / d q
            jac.col(0) = Vec2(1, 0);
            jac.col(1) = Vec2(0, 1);
            jac.col(2) = dr * f;
            jac.col(3) = r * Vec2(std::sin(ts[i]), 0.0);
            jac.col(4) = r * Vec2(0.0, std::sin(ts[i]) * std::cos(ts[i]));

            jtj += jac.transpose() * jac;
            jtr += jac.transpose() * resid;
        }

        bool stepped = false;
        for (int attempt = 0; attempt < 20; ++attempt) {
            Eigen::Matrix<double, 5, 5> damped = jtj;
            for (int d = 0; d < 5; ++d)
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
            const Eigen::Matrix<double, 5, 1> delta = damped.ldlt().solve(jtr);

            Params trial = q;
            trial.cx += delta(0);
            trial.cy += delta(1);
            trial.theta += delta(2);
            trial.a += delta(3);
            trial.b += delta(4);

            std::vector<double> trial_ts;
            const double trial_cost = cost_of(trial, points, trial_ts);
            if (trial_cost <= cost) {
                q = trial;
                ts = std::move(trial_ts);
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (delta.norm() < 1e-8) converged = true;
                break;
            }
            lambda *= 3.0;
            if (lambda > 1e12) break;
        }
        if (converged || !stepped) break;
    }

    CurveFit fit;
    fit.center = Vec3(q.cx, q.cy, mean_z);
    fit.semi_axis_a = std::abs(q.a);
    fit.semi_axis_b = std::abs(q.b);
    // A and B sign flips reparameterize the same curve; orientation mod pi
    double theta = wrap_angle(q.theta);
    if (theta >= kPi / 2.0) theta -= kPi;
    if (theta < -kPi / 2.0) theta += kPi;
    fit.orientation = theta;
    fit.residual_rms = std::sqrt(cost / static_cast<double>(points.size()));
    fit.converged = converged;
    fit.iterations = iter + 1;
    return fit;
}

bool fit_acceptable(const CurveFit& fit, double rel_residual_max) {
    if (!fit.converged) return false;
    if (fit.semi_axis_a <= 0.0 || fit.semi_axis_b <= 0.0) return false;
    return fit.residual_rms <= rel_residual_max * fit.semi_axis_a;
}

Vec3 standoff_point(const CurveFit& fit, const safety::FenceHull& arena,
                    double lateral_offset) {
    // curvature is rotation/translation invariant; scan in the local frame
    constexpr int samples = 720;
    double best_t = 0.0;
    double best_k = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double t = 2.0 * kPi * i / samples;
        const Vec2 d1 = gerono_dt(t, fit.semi_axis_a, fit.semi_axis_b);
        const Vec2 d2 = gerono_dtt(t, fit.semi_axis_a, fit.semi_axis_b);
        const double speed_sq = d1.squaredNorm();
        if (speed_sq < 1e-12) continue;
        const double k =
            std::abs(d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(speed_sq, 1.5);
        if (k < best_k) { best_k = k; best_t = t; }
    }

    const Vec3 on_curve = fit.point(best_t);
    const Vec3 tan = fit.tangent(best_t);
    const Vec3 lateral(-tan.y(), tan.x(), 0.0);

    const Vec3 plus = on_curve + lateral_offset * lateral;
    const Vec3 minus = on_curve - lateral_offset * lateral;
    const bool plus_ok = arena.contains(plus);
    const bool minus_ok = arena.contains(minus);
    if (plus_ok && minus_ok)
        return arena.signed_distance(plus) <= arena.signed_distance(minus) ? plus : minus;
    if (plus_ok) return plus;
    if (minus_ok) return minus;
    throw Error("standoff_point: no feasible point inside the fence");
}

}  // namespace ais::estimation
