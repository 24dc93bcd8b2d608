#include "ais/simworld/world.hpp"

namespace ais::simworld {

namespace {
constexpr double kGravity = 9.81;
constexpr double kBallMassKg = 0.06;
constexpr double kSwingDamping = 1.5; // 1/s
}  // namespace

Vec3 TargetModel::point(double t) const {
    const Vec3 local(semi_axis_a * std::sin(t),
                     semi_axis_b * std::sin(t) * std::cos(t), 0.0);
    return center + RotationMatrix::from_yaw_pitch_roll(yaw, pitch, roll) * local;
}

Vec3 TargetModel::tangent(double t) const {
    const Vec3 local(semi_axis_a * std::cos(t), semi_axis_b * std::cos(2.0 * t), 0.0);
    const Vec3 world = RotationMatrix::from_yaw_pitch_roll(yaw, pitch, roll) * local;
    const double n = world.norm();
    return n > 1e-12 ? Vec3(world / n) : Vec3::UnitX();
}

Vec3 BalloonModel::position(double time) const {
    const Vec3 sway(std::cos(sway_direction), std::sin(sway_direction), 0.0);
    return anchor + Vec3(0.0, 0.0, radius) +
           sway_amplitude * std::sin(2.0 * kPi * sway_freq_hz * time + sway_phase) * sway;
}

World::World(const WorldConfig& cfg, std::uint64_t seed, const std::vector<UavInit>& uavs)
    : cfg_(cfg) {
    path_param_ = cfg_.target.start_param;
    for (const auto& u : uavs) {
        uav_ids_.push_back(u.id);
        VehicleState s;
        s.position = u.position;
        s.yaw = u.yaw;
        uav_states_.push_back(s);
        // independent deterministic stream per UAV keeps sensing order-free
        sensor_rngs_.emplace_back(seed * 0x9e3779b97f4a7c15ULL + 0x1000 + u.id);
    }
    prev_target_velocity_ = cfg_.target.speed * cfg_.target.tangent(path_param_);
    advance_ball();
}

Vec3 World::target_position() const { return cfg_.target.point(path_param_); }

Vec3 World::target_velocity() const {
    return cfg_.target.speed * cfg_.target.tangent(path_param_);
}

int World::balloons_alive() const {
    int n = 0;
    for (const auto& b : cfg_.balloons) n += b.alive ? 1 : 0;
    return n;
}

Vec3 World::end_effector_position(int uav_index) const {
    const VehicleState& s = uav_states_[uav_index];
    return s.position + s.body_to_world() * cfg_.mount.offset_body;
}

void World::advance_target() {
    // constant path speed: dt_param = speed * dt / |dP/dparam|, midpoint rule
    const auto speed_of = [this](double t) {
        const Vec3 d(cfg_.target.semi_axis_a * std::cos(t),
                     cfg_.target.semi_axis_b * std::cos(2.0 * t), 0.0);
        return std::max(d.norm(), 1e-9);
    };
    const double k1 = cfg_.target.speed * cfg_.dt / speed_of(path_param_);
    const double k2 =
        cfg_.target.speed * cfg_.dt / speed_of(path_param_ + 0.5 * k1);
    path_param_ += k2;
}

void World::advance_ball() {
    if (ball_attached_to_ >= 0) {
        ball_position_ = end_effector_position(
            static_cast<int>(std::find(uav_ids_.begin(), uav_ids_.end(), ball_attached_to_) -
                             uav_ids_.begin()));
        return;
    }
    const double len = cfg_.target.rod_length;
    const double max_swing = 0.6 * len;
    if (ball_swing_.norm() > max_swing)
        ball_swing_ *= max_swing / ball_swing_.norm();
    const double drop = std::sqrt(len * len - ball_swing_.squaredNorm());
    ball_position_ = target_position() + Vec3(ball_swing_.x(), ball_swing_.y(), -drop);
}

void World::check_contacts() {
    const Vec3 ball = ball_position_;
    const Vec3 v_ball = target_velocity();
    for (std::size_t i = 0; i < uav_states_.size(); ++i) {
        const Vec3 eff = end_effector_position(static_cast<int>(i));

        if (cfg_.has_target && ball_attached_to_ < 0 && !grab_reported_) {
            const Vec3 d = ball - eff;
            const double dist = d.norm();
            if (dist < cfg_.grab_eq_radius) {
                const double closing =
                    dist > 1e-9 ? (uav_states_[i].velocity - v_ball).dot(d / dist) : 1.0;
                if (closing >= cfg_.detach_speed) {
                    ball_attached_to_ = uav_ids_[i];
                    grab_reported_ = true;
                    pending_events_.push_back({ContactEvent::Kind::grab_success,
                                               uav_ids_[i], -1, time_, kBallMassKg});
                }
            }
        }

        for (std::size_t b = 0; b < cfg_.balloons.size(); ++b) {
            auto& balloon = cfg_.balloons[b];
            if (!balloon.alive) continue;
            if ((balloon.position(time_) - eff).norm() < cfg_.pop_eq_radius) {
                balloon.alive = false;
                pending_events_.push_back({ContactEvent::Kind::balloon_popped,
                                           uav_ids_[i], static_cast<int>(b), time_, 0.0});
            }
        }
    }
}

void World::step(const std::vector<control::AutopilotCommand>& commands) {
    const double dt = cfg_.dt;
    const double av = std::exp(-dt / cfg_.plant.tau_v);
    const double ar = std::exp(-dt / cfg_.plant.tau_r);

    for (std::size_t i = 0; i < uav_states_.size(); ++i) {
        VehicleState& s = uav_states_[i];
        Vec3 u = commands[i].v_d;
        const double n = u.norm();
        if (n > cfg_.plant.speed_cap) u *= cfg_.plant.speed_cap / n;

        s.velocity = u + (s.velocity - u) * av;
        s.position += s.velocity * dt;
        s.yaw_rate = commands[i].r_d + (s.yaw_rate - commands[i].r_d) * ar;
        s.yaw = wrap_angle(s.yaw + s.yaw_rate * dt);
    }

    if (cfg_.has_target) {
        const Vec3 v_before = target_velocity();
        advance_target();
        const Vec3 v_after = target_velocity();
        const Vec3 accel = (v_after - v_before) / dt;

        // linearized suspended-ball swing driven by target acceleration
        const Vec2 a_drive(-accel.x(), -accel.y());
        const Vec2 swing_acc = a_drive -
                               (kGravity / cfg_.target.rod_length) * ball_swing_ -
                               kSwingDamping * ball_swing_rate_;
        ball_swing_rate_ += swing_acc * dt;
        ball_swing_ += ball_swing_rate_ * dt;
        prev_target_velocity_ = v_after;
    }

    time_ += dt;
    advance_ball();
    check_contacts();
}

SensorFrame World::sense(int uav_index) {
    SensorFrame frame;
    auto& rng = sensor_rngs_[uav_index];
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const VehicleState& self = uav_states_[uav_index];
    const auto& cam = cfg_.camera;
    const double sigma = cfg_.sensing.sigma_px;

    const auto visible = [&](const Vec3& world_point,
                             double radius) -> std::optional<PixelObservation> {
        const Vec3 in_cam = core::world_to_camera(world_point, self, cfg_.mount);
        if (in_cam.z() <= 0.1 || in_cam.norm() > cfg_.sensing.max_range)
            return std::nullopt;
        auto px = core::project(in_cam, cam, radius, time_);
        if (!px) return std::nullopt;
        if (unit(rng) < cfg_.sensing.dropout_prob) return std::nullopt;
        px->t_x += sigma * gauss(rng);
        px->t_y += sigma * gauss(rng);
        // enclosing-circle radii average many boundary pixels: subpixel noise
        px->apparent_radius =
            std::max(0.3, px->apparent_radius + 0.25 * sigma * gauss(rng));
        return px;
    };

    const auto contour_for = [&](const PixelObservation& px) {
        vision::ContourStats c;
        c.center = Vec2(px.t_x, px.t_y);
        c.enclosing_radius = px.apparent_radius;
        const double circ = std::clamp(0.97 - std::abs(0.02 * gauss(rng)), 0.8, 1.0);
        c.area = kPi * px.apparent_radius * px.apparent_radius;
        c.perimeter = std::sqrt(4.0 * kPi * c.area / circ);
        c.distance_below_uav = std::numeric_limits<double>::quiet_NaN();
        return c;
    };

    // other interceptor UAVs as plain boxes (wide, flat drone silhouettes)
    const double height_ratio = cfg_.uav_height / cfg_.uav_span;
    std::optional<double> target_box_bottom;
    for (std::size_t i = 0; i < uav_states_.size(); ++i) {
        if (static_cast<int>(i) == uav_index) continue;
        if (auto px = visible(uav_states_[i].position, cfg_.uav_span / 2.0)) {
            UavBoxSighting s;
            s.uav_id = uav_ids_[i];
            s.box = {0, 0, px->t_x, px->t_y, 2.0 * px->apparent_radius,
                     2.0 * px->apparent_radius * height_ratio};
            frame.uav_boxes.push_back(s);
        }
    }

    if (cfg_.has_target) {
        if (auto px = visible(target_position(), cfg_.uav_span / 2.0)) {
            UavBoxSighting s;
            s.uav_id = -1;
            s.box = {0, 0, px->t_x, px->t_y, 2.0 * px->apparent_radius,
                     2.0 * px->apparent_radius * height_ratio};
            frame.uav_boxes.push_back(s);
            target_box_bottom = px->t_y + px->apparent_radius * height_ratio;
        }

        if (ball_attached_to_ < 0) {
            if (auto px = visible(ball_position_, cfg_.target.ball_radius)) {
                BallSighting b;
                b.pixel = *px;
                b.contour = contour_for(*px);
                if (target_box_bottom) {
                    b.contour.distance_below_uav = px->t_y - *target_box_bottom;
                    b.rod_visible = true;
                }
                frame.ball = b;
            }
        }
    }

    for (std::size_t b = 0; b < cfg_.balloons.size(); ++b) {
        if (!cfg_.balloons[b].alive) continue;
        if (auto px = visible(cfg_.balloons[b].position(time_), cfg_.balloons[b].radius)) {
            BalloonSighting s;
            s.pixel = *px;
            s.contour = contour_for(*px);
            s.balloon_index = static_cast<int>(b);
            frame.balloons.push_back(s);
        }
    }
    return frame;
}

std::vector<ContactEvent> World::take_contact_events() {
    return std::exchange(pending_events_, {});
}

}  // namespace ais::simworld
