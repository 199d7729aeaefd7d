#include "cas/tracking.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "cas/health.hpp"

namespace cas {

const Track* TrackSet::find(int track_id) const {
  for (const auto& tr : tracks)
    if (tr.track_id == track_id) return &tr;
  return nullptr;
}

namespace {

Position predict(const Track& tr, double t) {
  return tr.position + (t - tr.state_time) * tr.velocity.vec();
}

void push_history(Track& tr, bool hit) {
  tr.detection_history.push_back(hit);
  while (tr.detection_history.size() > kDetectionHistoryCap) tr.detection_history.pop_front();
}

}  // namespace

TrackSet associate_and_update(const TrackSet& in, const DetectionOutput& detections, double t,
                              const TrackingConfig& cfg) {
  TrackSet out = in;
  const auto& meas = detections.traffic;

  struct Pair {
    double dist;
    int track_id;
    std::size_t track_idx;
    std::size_t meas_idx;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < out.tracks.size(); ++i) {
    const Position pred = predict(out.tracks[i], t);
    for (std::size_t j = 0; j < meas.size(); ++j) {
      const double d = (meas[j].position - pred).norm();
      if (d <= cfg.gate_radius) pairs.push_back({d, out.tracks[i].track_id, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.dist, a.track_id, a.meas_idx) < std::tie(b.dist, b.track_id, b.meas_idx);
  });

  std::vector<bool> track_taken(out.tracks.size(), false);
  std::vector<bool> meas_taken(meas.size(), false);
  for (const Pair& p : pairs) {
    if (track_taken[p.track_idx] || meas_taken[p.meas_idx]) continue;
    track_taken[p.track_idx] = meas_taken[p.meas_idx] = true;

    Track& tr = out.tracks[p.track_idx];
    const Position& z = meas[p.meas_idx].position;
    if (tr.history_len == 1) {
      // Second hit: initialise velocity by two-point differencing.
      const double dt = t - tr.last_update;
      if (dt > 0.0) tr.velocity = Velocity::from((1.0 / dt) * (z - tr.last_measurement));
      tr.position = z;
    } else {
      const double dt = t - tr.state_time;
      const Position pred = predict(tr, t);
      const Vec3 r = z - pred;
      tr.position = pred + cfg.alpha * r;
      if (dt > 0.0) tr.velocity = Velocity::from(tr.velocity.vec() + (cfg.beta / dt) * r);
    }
    tr.state_time = t;
    tr.last_update = t;
    tr.last_measurement = z;
    tr.last_measure_id = meas[p.meas_idx].measure_id;
    ++tr.hits;
    ++tr.history_len;
    push_history(tr, true);
    if (persistence_filter(tr.detection_history, cfg.confirm_m))
      tr.confidence = TrackConfidence::Confirmed;
  }

  for (std::size_t j = 0; j < meas.size(); ++j) {
    if (meas_taken[j]) continue;
    Track tr;
    tr.track_id = out.next_id++;
    tr.position = meas[j].position;
    tr.last_update = t;
    tr.state_time = t;
    tr.hits = 1;
    tr.history_len = 1;
    tr.last_measurement = meas[j].position;
    tr.last_measure_id = meas[j].measure_id;
    push_history(tr, true);
    if (persistence_filter(tr.detection_history, cfg.confirm_m))
      tr.confidence = TrackConfidence::Confirmed;
    out.tracks.push_back(std::move(tr));
  }
  return out;
}

TrackSet coast_and_drop(const TrackSet& in, double t, const TrackingConfig& cfg) {
  TrackSet out;
  out.next_id = in.next_id;
  for (Track tr : in.tracks) {
    if (t - tr.last_update > cfg.drop_after) continue;
    if (tr.last_update < t) {
      tr.position = predict(tr, t);
      tr.state_time = t;
      tr.hits = 0;
      push_history(tr, false);
    }
    out.tracks.push_back(std::move(tr));
  }
  return out;
}

AccuracyReport check_accuracy(const Track& track, const Position& truth_pos,
                              const Velocity& truth_vel, const TrackingConfig& cfg) {
  AccuracyReport r;
  r.position_error = (track.position - truth_pos).norm();
  r.velocity_error = (track.velocity.vec() - truth_vel.vec()).norm();
  r.pass = r.position_error <= cfg.pos_accuracy_y && r.velocity_error <= cfg.vel_accuracy_z;
  return r;
}

std::string serialize(const TrackSet& ts) {
  std::string s = fmt::format("next_id={}\n", ts.next_id);
  for (const auto& tr : ts.tracks) {
    s += fmt::format("{} {:a} {:a} {:a} {:a} {:a} {:a} {} {} {:a} {:a} {} {}\n", tr.track_id,
                     tr.position.x, tr.position.y, tr.position.z, tr.velocity.vx, tr.velocity.vy,
                     tr.velocity.vz, tr.confirmed() ? "C" : "T", tr.hits, tr.last_update,
                     tr.state_time, tr.history_len, tr.last_measure_id);
  }
  return s;
}

}  // namespace cas
