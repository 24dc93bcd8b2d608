#include "ais/runner/agent.hpp"

#include <algorithm>

namespace ais::runner {

using guidance::GuidanceCommand;
using oms::TaskKind;

namespace {

// avoidance precedence: the UAV doing the touchier job holds its line
int rank_of(TaskKind k) {
    switch (k) {
        case TaskKind::grab: return 5;
        case TaskKind::track: return 4;
        case TaskKind::pop: return 3;
        case TaskKind::takeoff:
        case TaskKind::land: return 2;
        case TaskKind::explore_ball:
        case TaskKind::explore_balloon: return 1;
        default: return 0;
    }
}

}  // namespace

AgentExecutor::AgentExecutor(const UavSpec& spec, const ScenarioConfig& cfg,
                             const safety::FenceHull* hull)
    : spec_(spec), cfg_(cfg), hull_(hull),
      box_tracker_(vision::TrackerConfig{}, cfg.world.camera) {
    ref_model_.tau = cfg.sac_tau;

    oms::ExplorationConfig ec;
    ec.margin = cfg.mission.explore_margin;
    ec.grid_spacing = cfg.mission.grid_spacing;
    if (spec.role == oms::Role::popper) {
        ec.altitude = cfg.mission.popper_altitude;
        popper_waypoints_ = oms::exploration_waypoints(oms::ExploreKind::balloon, *hull, ec);
        popper_.phase = oms::PopPhase::explore;
    } else {
        ec.altitude = cfg.mission.grabber_altitude;
        ec.sweep_offset = spec.standby.y();
        sweep_waypoints_ = oms::exploration_waypoints(oms::ExploreKind::ball, *hull, ec);
    }
}

int AgentExecutor::priority_rank() const { return rank_of(task_); }

void AgentExecutor::switch_task(const oms::TaskDirective& d) {
    if (d.task.kind == task_ && d.task.assignee == spec_.id) {
        // refreshed hints for the same task
        if (d.position_hint) position_hint_ = d.position_hint;
        if (d.speed_hint) speed_hint_ = d.speed_hint;
        return;
    }
    task_ = d.task.kind;
    position_hint_ = d.position_hint;
    speed_hint_ = d.speed_hint;
    status_done_sent_ = false;
    ball_detected_sent_ = false;
    ball_misses_ = 0;
    ball_seen_this_task_ = false;
    task_start_t_ = -1.0;
    yaw_.reset();
}

std::optional<Vec3> AgentExecutor::ball_world(const simworld::BallSighting& s,
                                              const VehicleState& self) const {
    return vision::balloon_position(s.contour, cfg_.world.target.ball_radius,
                                    cfg_.world.camera, self, cfg_.world.mount);
}

std::optional<PixelObservation> AgentExecutor::accept_ball(
    const simworld::SensorFrame& frame, double t) {
    // two-step box tracking over every UAV detection in the frame
    std::vector<vision::BoxDetection> boxes;
    for (const auto& b : frame.uav_boxes) boxes.push_back(b.box);
    box_tracker_.step(boxes);

    if (!frame.ball) return std::nullopt;
    const auto& s = *frame.ball;

    if (s.rod_visible) {
        // search-phase gate: geometry must be consistent with the rod length
        vision::BallSearchConfig bc;
        bc.ball_radius = cfg_.world.target.ball_radius;
        bc.rod_length = cfg_.world.target.rod_length;
        bc.rod_tolerance = 60.0;
        if (vision::score(s.contour, bc) < 0.0) return std::nullopt;

        // tracking phase: the candidate must fall in the wedge hung from the
        // smoothed target box
        const bool fresh_track = last_ball_seen_t_ >= 0.0 && t - last_ball_seen_t_ < 0.2;
        if (fresh_track && !box_tracker_.tracks().empty()) {
            const vision::BoxTrack* best = nullptr;
            double best_d = 1e18;
            const Vec2 ball_px(s.pixel.t_x, s.pixel.t_y);
            for (const auto& trk : box_tracker_.tracks()) {
                if (!trk.confirmed()) continue;
                const double d = (trk.center() - ball_px).norm();
                if (d < best_d) { best_d = d; best = &trk; }
            }
            if (best) {
                const double prev_depth = core::depth_from_size(
                    std::max(last_ball_radius_px_, 0.5),
                    cfg_.world.target.ball_radius, cfg_.world.camera.f);
                const Vec2 box_bottom =
                    best->center() + Vec2(0.0, best->size().y() / 2.0);
                auto wedge =
                    vision::wedge_region(box_bottom, prev_depth,
                                         last_ball_radius_px_, bc, cfg_.world.camera);
                // coarse: depth-from-size jitter shifts the anchor
                wedge.half_width = std::max(wedge.half_width, 0.4 * wedge.offset_below);
                if (!wedge.contains(ball_px)) return std::nullopt;
            }
        }
    } else {
        // grab phase: square region around the last confirmed position
        if (task_ != TaskKind::track && task_ != TaskKind::grab) return std::nullopt;
        if (last_ball_pixel_) {
            const auto region =
                vision::square_region(*last_ball_pixel_, std::max(last_ball_radius_px_, 8.0));
            if (!region.contains(Vec2(s.pixel.t_x, s.pixel.t_y))) return std::nullopt;
        }
    }
    return s.pixel;
}

void AgentExecutor::publish_event(TickOutput& out, oms::EventKind kind, double t,
                                  double payload_kg) {
    oms::MissionEvent ev;
    ev.kind = kind;
    ev.agent_id = spec_.id;
    ev.t = t;
    ev.payload_kg = payload_kg;
    oms::BusMessage msg;
    msg.topic = kind == oms::EventKind::balloon_detected ||
                        kind == oms::EventKind::balloon_popped
                    ? oms::Topic::balloon_status
                    : oms::Topic::ball_status;
    msg.sender = spec_.id;
    msg.t = t;
    msg.payload = ev;
    out.outgoing.push_back(std::move(msg));
    out.events.push_back(oms::to_string(kind));
}

void AgentExecutor::publish_status(TickOutput& out, oms::TaskStatus status, double t) {
    oms::StatusReport r;
    r.task = task_;
    r.status = status;
    r.ball_visible = last_ball_seen_t_ >= 0.0 && t - last_ball_seen_t_ < 0.5;
    r.pops_confirmed = popper_.pops_confirmed;
    r.mission_done = popper_.phase == oms::PopPhase::done;
    if (fit_) {
        try {
            r.standoff =
                estimation::standoff_point(*fit_, *hull_, cfg_.mission.standoff_offset);
        } catch (const Error&) {
        }
        r.target_center = fit_->center;
    }
    if (speed_hint_) r.target_speed = speed_hint_;
    oms::BusMessage msg;
    msg.topic = oms::Topic::routine_status;
    msg.sender = spec_.id;
    msg.t = t;
    msg.payload = r;
    out.outgoing.push_back(std::move(msg));
}

GuidanceCommand AgentExecutor::run_track(const VehicleState& self,
                                         const std::optional<PixelObservation>& obs,
                                         const std::optional<Vec3>& ball_pos, double t,
                                         TickOutput& out) {
    const double dt = cfg_.world.dt;
    const auto& cam = cfg_.world.camera;

    if (obs && ball_pos) {
        ball_misses_ = 0;
        ball_seen_this_task_ = true;
        if (fit_ && !status_done_sent_) {
            // curve already estimated in an earlier stint; report and move on
            publish_status(out, oms::TaskStatus::done, t);
            status_done_sent_ = true;
        }
        ball_history_.emplace_back(t, *ball_pos);
        const double window = cfg_.mission.fit_window_s;
        while (!ball_history_.empty() &&
               t - ball_history_.front().first > window + 10.0)
            ball_history_.pop_front();

        // EKF over the smoothed target-plane position (world-frame inversion
        // re-encoded as pixel/depth with the canonical depth Z = f)
        estimation::PixelDepthMeasurement meas{ball_pos->x(), ball_pos->y(), cam.f};
        if (!ekf_ && ball_history_.size() >= 20) {
            estimation::EkfState s;
            Vec2 c = Vec2::Zero();
            for (const auto& [tt, p] : ball_history_) c += p.head<2>();
            s.curvature_center = c / static_cast<double>(ball_history_.size());
            s.estimate = ball_pos->head<2>();
            s.target_speed = cfg_.world.target.speed;
            s.meas_noise = Eigen::Matrix2d::Identity() * 0.5;
            ekf_ = s;
        } else if (ekf_) {
            const double radius = (ekf_->estimate - ekf_->curvature_center).norm();
            if (radius > 1e-3) *ekf_ = estimation::ekf_step(*ekf_, meas, cam.f, dt);
        }

        // enough history spanning a loop: fit, then hand over to the grab
        if (!fit_ && t >= next_fit_attempt_ &&
            !ball_history_.empty() &&
            ball_history_.back().first - ball_history_.front().first >= window) {
            // decimate into 0.2 s bins to wash out pixel noise
            std::vector<Vec3> binned;
            Vec3 acc = Vec3::Zero();
            int count = 0;
            double bin_start = ball_history_.front().first;
            for (const auto& [tt, p] : ball_history_) {
                if (tt - bin_start > 0.2 && count > 0) {
                    binned.push_back(acc / count);
                    acc = Vec3::Zero();
                    count = 0;
                    bin_start = tt;
                }
                acc += p;
                ++count;
            }
            if (count > 0) binned.push_back(acc / count);

            if (binned.size() >= 20) {
                const auto fit = estimation::fit_curve(binned);
                if (fit.converged && fit.residual_rms <= cfg_.mission.fit_residual_max) {
                    fit_ = fit;
                    // chord-speed estimate over the binned samples
                    double dist = 0.0;
                    for (std::size_t i = 1; i < binned.size(); ++i)
                        dist += (binned[i] - binned[i - 1]).norm();
                    const double span = ball_history_.back().first - ball_history_.front().first;
                    if (span > 1.0) speed_hint_ = dist / span;
                    publish_status(out, oms::TaskStatus::done, t);
                    status_done_sent_ = true;
                } else {
                    next_fit_attempt_ = t + 5.0;
                }
            } else {
                next_fit_attempt_ = t + 5.0;
            }
        }
        return guidance::track_command(obs, self, cfg_.tracking, ball_search_config(),
                                       cam, cfg_.world.mount, yaw_, dt);
    }

    // lost sight: head back toward the last known ball position.  A fresh
    // tracker that never had the ball gets a reacquisition window first.
    ++ball_misses_;
    if (ball_seen_this_task_) {
        if (ball_misses_ == cfg_.mission.lost_frames)
            publish_event(out, oms::EventKind::ball_lost, t);
    } else if (task_start_t_ >= 0.0 && t - task_start_t_ > 20.0) {
        publish_event(out, oms::EventKind::ball_lost, t);
        task_start_t_ = t; // rearm
    }
    if (last_ball_world_) {
        guidance::NavParams nav = cfg_.nav;
        nav.cruise_speed = 2.0;
        return guidance::goto_point(self, *last_ball_world_, nav, std::nullopt, yaw_, dt);
    }
    return {};
}

GuidanceCommand AgentExecutor::run_popper(const VehicleState& self, const TickInput& in,
                                          TickOutput& out) {
    const double dt = cfg_.world.dt;
    const auto& cam = cfg_.world.camera;

    // nearest balloon first
    std::optional<PixelObservation> obs;
    std::optional<Vec3> world;
    std::vector<double> depths;
    for (const auto& b : in.frame.balloons)
        depths.push_back(core::depth_from_size(std::max(b.pixel.apparent_radius, 0.3),
                                               cfg_.world.balloons.empty()
                                                   ? 0.15
                                                   : cfg_.world.balloons[0].radius,
                                               cam.f));
    const int pick = guidance::select_nearest_balloon(depths);
    if (pick >= 0) {
        const auto& s = in.frame.balloons[pick];
        obs = s.pixel;
        world = vision::balloon_position(s.contour,
                                         cfg_.world.balloons[s.balloon_index].radius, cam,
                                         self, cfg_.world.mount);
    }

    oms::PopperConfig pc;
    pc.v_approach = cfg_.grab.v_target + cfg_.grab.v_excess;
    pc.empty_view_frames = cfg_.mission.confirm_frames;
    pc.nav = cfg_.nav;

    const auto prev_phase = popper_.phase;
    const auto result = oms::balloon_mission_step(popper_, self, obs, world,
                                                  popper_waypoints_, pc, cam,
                                                  cfg_.world.mount, yaw_, dt);

    if (result.balloon_detected)
        publish_event(out, oms::EventKind::balloon_detected, in.t);
    if (result.pop_confirmed) {
        publish_event(out, oms::EventKind::balloon_popped, in.t);
        publish_status(out, oms::TaskStatus::done, in.t);
    }
    if (result.mission_done && prev_phase != oms::PopPhase::done) {
        publish_event(out, oms::EventKind::exploration_complete, in.t);
        publish_status(out, oms::TaskStatus::done, in.t);
    }
    return result.command;
}

vision::BallSearchConfig AgentExecutor::ball_search_config() const {
    vision::BallSearchConfig bc;
    bc.ball_radius = cfg_.world.target.ball_radius;
    bc.rod_length = cfg_.world.target.rod_length;
    bc.rod_tolerance = 60.0;
    return bc;
}

GuidanceCommand AgentExecutor::run_task(const VehicleState& self, const TickInput& in,
                                        TickOutput& out) {
    const double dt = cfg_.world.dt;
    const double t = in.t;
    const auto& cam = cfg_.world.camera;

    const std::optional<PixelObservation> obs = accept_ball(in.frame, t);
    std::optional<Vec3> ball_pos;
    if (obs && in.frame.ball) {
        ball_pos = ball_world(*in.frame.ball, self);
        if (ball_pos) {
            last_ball_world_ = ball_pos;
            last_ball_pixel_ = Vec2(obs->t_x, obs->t_y);
            last_ball_radius_px_ = obs->apparent_radius;
            last_ball_seen_t_ = t;
        }
    }

    switch (task_) {
        case TaskKind::takeoff: {
            const double alt = spec_.role == oms::Role::popper
                                   ? cfg_.mission.popper_altitude
                                   : cfg_.mission.grabber_altitude;
            const Vec3 target(spec_.start.x(), spec_.start.y(), alt);
            if (!status_done_sent_ && std::abs(self.position.z() - alt) < 0.3) {
                publish_status(out, oms::TaskStatus::done, t);
                status_done_sent_ = true;
            }
            return guidance::goto_point(self, target, cfg_.nav, spec_.start_yaw, yaw_, dt);
        }

        case TaskKind::explore_ball: {
            if (obs && ball_pos && !ball_detected_sent_) {
                publish_event(out, oms::EventKind::ball_detected, t);
                ball_detected_sent_ = true;
            }
            if (sweep_waypoints_.empty()) return {};
            const auto& wp = sweep_waypoints_[sweep_idx_ % sweep_waypoints_.size()];
            if ((self.position - wp.position).norm() < 2.0) ++sweep_idx_;
            const auto& cur = sweep_waypoints_[sweep_idx_ % sweep_waypoints_.size()];
            std::optional<double> heading;
            if (cur.heading_fixed) heading = cur.heading;
            return guidance::goto_point(self, cur.position, cfg_.nav, heading, yaw_, dt);
        }

        case TaskKind::track:
            return run_track(self, obs, ball_pos, t, out);

        case TaskKind::grab: {
            if (grabbed_) return {};
            if (obs) {
                ball_misses_ = 0;
                ball_seen_this_task_ = true;
                guidance::GrabParams gp = cfg_.grab;
                if (speed_hint_) gp.v_target = *speed_hint_;
                last_mission_cmd_ = guidance::grab_command(obs, self, gp, cam,
                                                           cfg_.world.mount, yaw_, dt);
                return last_mission_cmd_;
            }
            ++ball_misses_;
            if (ball_seen_this_task_) {
                if (ball_misses_ == cfg_.mission.lost_frames)
                    publish_event(out, oms::EventKind::grab_failed, t);
                if (ball_misses_ < cfg_.mission.lost_frames) return last_mission_cmd_;
            } else if (task_start_t_ >= 0.0 && t - task_start_t_ > 10.0) {
                publish_event(out, oms::EventKind::grab_failed, t);
                task_start_t_ = t; // rearm
            }
            if (last_ball_world_)
                return guidance::goto_point(self, *last_ball_world_, cfg_.nav,
                                            std::nullopt, yaw_, dt);
            return {};
        }

        case TaskKind::grab_standby: {
            const Vec3 target = position_hint_ ? *position_hint_ : spec_.standby;
            std::optional<double> heading;
            const Vec3 focus = last_ball_world_ ? *last_ball_world_
                                                : cfg_.world.target.center;
            const Vec3 look = focus - self.position;
            if (look.head<2>().norm() > 1e-6)
                heading = std::atan2(look.y(), look.x());
            return guidance::goto_point(self, target, cfg_.nav, heading, yaw_, dt);
        }

        case TaskKind::explore_balloon:
        case TaskKind::pop:
            return run_popper(self, in, out);

        case TaskKind::land: {
            // come home at altitude first, then let down gently
            const Vec3 home_xy(spec_.start.x(), spec_.start.y(), self.position.z());
            const double lateral =
                (self.position.head<2>() - home_xy.head<2>()).norm();
            Vec3 target(spec_.start.x(), spec_.start.y(), 0.6);
            guidance::NavParams nav = cfg_.nav;
            if (lateral > 1.5) {
                target.z() = std::max(self.position.z(), 2.0);
            } else {
                nav.cruise_speed = 1.0;
                nav.arrive_gain = 0.5;
            }
            if (!status_done_sent_ && lateral < 0.8 &&
                std::abs(self.position.z() - 0.6) < 0.4) {
                publish_status(out, oms::TaskStatus::done, t);
                status_done_sent_ = true;
            }
            return guidance::goto_point(self, target, nav, std::nullopt, yaw_, dt);
        }

        case TaskKind::restart:
            return {};
    }
    return {};
}

AgentExecutor::TickOutput AgentExecutor::tick(const VehicleState& self,
                                              const TickInput& in) {
    TickOutput out;
    const double dt = cfg_.world.dt;

    for (const auto& msg : in.inbox) {
        if (const auto* d = std::get_if<oms::TaskDirective>(&msg.payload)) {
            switch_task(*d);
        } else if (const auto* s = std::get_if<oms::StateSnapshot>(&msg.payload)) {
            neighbors_[msg.sender] = {s->state, s->priority_rank, msg.t};
        }
    }

    if (!in.alive) return out; // failed hardware: zero commands, radio silence
    if (task_start_t_ < 0.0) task_start_t_ = in.t;

    for (const auto& c : in.contacts) {
        if (c.kind == simworld::ContactEvent::Kind::grab_success && c.uav_id == spec_.id) {
            // limit switches trip only above the calibrated payload mass
            if (c.payload_kg >= oms::kGrabDetectMinKg) {
                grabbed_ = true;
                publish_event(out, oms::EventKind::grab_success, in.t, c.payload_kg);
            }
        }
    }

    guidance::GuidanceCommand mission = run_task(self, in, out);

    // always-on safety: inter-UAV collision cones plus the geo-fence
    Vec3 accel_sum = Vec3::Zero();
    for (const auto& [nid, info] : neighbors_) {
        if (in.t - info.t > 1.0) continue; // stale link
        const auto k = safety::relative_kinematics(self, info.state);
        safety::Priority pr = safety::Priority::equal;
        if (priority_rank() > info.priority_rank) pr = safety::Priority::higher;
        else if (priority_rank() < info.priority_rank) pr = safety::Priority::lower;
        const Vec3 a = safety::avoidance_accel(k, pr, cfg_.avoidance);
        accel_sum += a;
        static const bool debug_avoid = std::getenv("AIS_DEBUG_AVOID") != nullptr;
        if (debug_avoid && k.r0 < 8.0)
            std::fprintf(stderr, "t=%.2f self=%d nbr=%d r0=%.2f vr=%.2f pr=%d |a|=%.2f\n",
                         in.t, spec_.id, nid, k.r0, k.v_r0, static_cast<int>(pr),
                         a.norm());
    }
    safety_velocity_ = safety_velocity_ * std::exp(-dt / 3.0) + accel_sum * dt;

    // safety tasks preempt the mission slot: while this agent is the one
    // maneuvering, its mission pull pauses instead of fighting the escape
    if (accel_sum.norm() > 1e-9) mission.v_des = Vec3::Zero();

    safety::FenceCommand fence = safety::fence_repulsion(self.position, *hull_, cfg_.fence);
    out.fence_breach = fence.breach;

    // blend integrates accelerations into the commanded velocity
    const Vec3 synth_accel = (safety_velocity_ + fence.velocity) / dt;
    const Vec3 accels[] = {synth_accel};
    guidance::GuidanceCommand blended = oms::blend_commands(mission, accels, dt);

    // ground-proximity guard: the fence leaves the floor open for landing,
    // so cap the sink rate instead
    if (self.position.z() < 1.5)
        blended.v_des.z() = std::max(
            blended.v_des.z(), -0.5 * std::max(self.position.z() - 0.2, 0.0));

    out.autopilot = control::sac_step(blended, self, ref_model_, cfg_.sac, dt);

    // state sharing: position and velocity go to everyone
    oms::StateSnapshot snap;
    snap.state = self;
    snap.priority_rank = priority_rank();
    for (oms::Topic topic : {oms::Topic::position, oms::Topic::velocity}) {
        oms::BusMessage msg;
        msg.topic = topic;
        msg.sender = spec_.id;
        msg.t = in.t;
        msg.payload = snap;
        out.outgoing.push_back(msg);
    }
    publish_status(out, oms::TaskStatus::active, in.t);
    return out;
}

}  // namespace ais::runner
