#include "ais/vision/tracker.hpp"

#include <fstream>
#include <sstream>

#include "ais/vision/hungarian.hpp"

namespace ais::vision {

namespace {

Mat8 transition() {
    Mat8 f = Mat8::Identity();
    for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0; // dt = 1 frame
    return f;
}

Mat8 process_noise(double sigma) {
    Mat8 q = Mat8::Zero();
    const double s2 = sigma * sigma;
    // white-acceleration model, dt = 1
    for (int i = 0; i < 4; ++i) {
        q(i, i) = s2 / 4.0;
        q(i, i + 4) = s2 / 2.0;
        q(i + 4, i) = s2 / 2.0;
        q(i + 4, i + 4) = s2;
    }
    return q;
}

void symmetrize(Mat8& p) { p = 0.5 * (p + p.transpose()).eval(); }

}  // namespace

BoxTrack::BoxTrack(int id, const BoxDetection& det, const TrackerConfig& cfg)
    : id_(id), cfg_(cfg) {
    state_ << det.cx, det.cy, det.w, det.h, 0, 0, 0, 0;
    cov_ = Mat8::Identity() * (cfg.sigma_meas * cfg.sigma_meas);
    for (int i = 4; i < 8; ++i) cov_(i, i) = 100.0; // velocity unknown at birth
    hits_ = 1;
}

void BoxTrack::predict() {
    const Mat8 f = transition();
    state_ = f * state_;
    cov_ = f * cov_ * f.transpose() + process_noise(cfg_.sigma_process);
    symmetrize(cov_);
    ++age_;
}

void BoxTrack::update(const BoxDetection& det) {
    Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
    h.block<4, 4>(0, 0).setIdentity();
    const Eigen::Matrix4d r =
        Eigen::Matrix4d::Identity() * (cfg_.sigma_meas * cfg_.sigma_meas);

    Eigen::Vector4d z(det.cx, det.cy, det.w, det.h);
    const Eigen::Vector4d innov = z - h * state_;
    const Eigen::Matrix4d s = h * cov_ * h.transpose() + r;
    const Eigen::Matrix<double, 8, 4> k = cov_ * h.transpose() * s.inverse();

    state_ += k * innov;
    cov_ = (Mat8::Identity() - k * h) * cov_;
    symmetrize(cov_);

    misses_ = 0;
    ++hits_;
    if (hits_ >= cfg_.confirm_hits) confirmed_ = true;
}

void BoxTrack::mark_missed() {
    ++misses_;
    hits_ = 0;
}

Association associate(const std::vector<BoxTrack>& tracks,
                      const std::vector<BoxDetection>& detections, double gate) {
    Association out;
    if (tracks.empty() || detections.empty()) {
        for (int i = 0; i < static_cast<int>(tracks.size()); ++i)
            out.unmatched_tracks.push_back(i);
        for (int j = 0; j < static_cast<int>(detections.size()); ++j)
            out.unmatched_detections.push_back(j);
        return out;
    }

    Eigen::MatrixXd cost(tracks.size(), detections.size());
    for (int i = 0; i < cost.rows(); ++i)
        for (int j = 0; j < cost.cols(); ++j)
            cost(i, j) =
                (tracks[i].center() - Vec2(detections[j].cx, detections[j].cy)).norm();

    const std::vector<int> row_to_col = solve_assignment(cost);

    std::vector<char> det_used(detections.size(), false);
    for (int i = 0; i < static_cast<int>(tracks.size()); ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && cost(i, j) <= gate) {
            out.matches.emplace_back(i, j);
            det_used[j] = true;
        } else {
            out.unmatched_tracks.push_back(i);
        }
    }
    for (int j = 0; j < static_cast<int>(detections.size()); ++j)
        if (!det_used[j]) out.unmatched_detections.push_back(j);
    return out;
}

void TrackerRegistry::step(const std::vector<BoxDetection>& detections) {
    for (auto& t : tracks_) t.predict();

    const Association a = associate(tracks_, detections, gate_);
    for (const auto& [ti, di] : a.matches) tracks_[ti].update(detections[di]);
    for (int ti : a.unmatched_tracks) tracks_[ti].mark_missed();
    for (int di : a.unmatched_detections)
        tracks_.emplace_back(next_id_++, detections[di], cfg_);

    std::erase_if(tracks_,
                  [this](const BoxTrack& t) { return t.misses() >= cfg_.delete_misses; });
}

std::vector<BoxDetection> load_detections_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open detections csv: " + path);
    std::vector<BoxDetection> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) { // header row required
            first = false;
            continue;
        }
        std::istringstream ss(line);
        BoxDetection d;
        char comma;
        ss >> d.frame >> comma >> d.object_class >> comma >> d.cx >> comma >> d.cy >>
            comma >> d.w >> comma >> d.h;
        if (!ss.fail()) rows.push_back(d);
    }
    return rows;
}

}  // namespace ais::vision
