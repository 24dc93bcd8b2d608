#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ais/core/types.hpp"

namespace ais::vision {

/// Axis-aligned box detection in the image plane.
struct BoxDetection {
    int frame = 0;
    int object_class = 0; // 0 = uav, 1 = ball, 2 = balloon
    double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;
};

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

struct TrackerConfig {
    double sigma_process = 1.0;  // px/frame^2
    double sigma_meas = 2.0;     // px
    double gate_fraction = 0.5;  // of the image diagonal
    int confirm_hits = 3;
    int delete_misses = 10;
};

/// Constant-velocity track over [cx, cy, w, h] with per-frame velocities.
class BoxTrack {
  public:
    BoxTrack(int id, const BoxDetection& det, const TrackerConfig& cfg);

    void predict();
    void update(const BoxDetection& det);
    void mark_missed();

    int id() const { return id_; }
    int age() const { return age_; }
    int hits() const { return hits_; }
    int misses() const { return misses_; }
    bool confirmed() const { return confirmed_; }

    Vec2 center() const { return {state_(0), state_(1)}; }
    Vec2 size() const { return {state_(2), state_(3)}; }
    Vec2 velocity() const { return {state_(4), state_(5)}; }
    const Vec8& state() const { return state_; }
    const Mat8& covariance() const { return cov_; }

  private:
    int id_;
    TrackerConfig cfg_;
    Vec8 state_ = Vec8::Zero();
    Mat8 cov_ = Mat8::Identity();
    int age_ = 0;
    int hits_ = 0;
    int misses_ = 0;
    bool confirmed_ = false;
};

struct Association {
    std::vector<std::pair<int, int>> matches; // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_detections;
};

/// Match predicted track centers to detections by minimum total Euclidean
/// distance; assignments costlier than the gate are broken.
Association associate(const std::vector<BoxTrack>& tracks,
                      const std::vector<BoxDetection>& detections,
                      double gate);

/// Per-camera two-step tracker: predict, associate, update, manage lifetimes.
class TrackerRegistry {
  public:
    explicit TrackerRegistry(const TrackerConfig& cfg, const CameraIntrinsics& cam)
        : cfg_(cfg), gate_(cfg.gate_fraction * std::hypot(cam.w, cam.h)) {}

    void step(const std::vector<BoxDetection>& detections);

    const std::vector<BoxTrack>& tracks() const { return tracks_; }

  private:
    TrackerConfig cfg_;
    double gate_;
    int next_id_ = 1;
    std::vector<BoxTrack> tracks_;
};

/// Detection replay rows: frame, class, cx, cy, w, h.
std::vector<BoxDetection> load_detections_csv(const std::string& path);

}  // namespace ais::vision
