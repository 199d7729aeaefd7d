#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "cas/core_types.hpp"
#include "cas/detection.hpp"

namespace cas {

enum class TrackConfidence { Tentative, Confirmed };

struct Track {
  int track_id = 0;
  Position position;        // estimate at state_time
  Velocity velocity;
  TrackConfidence confidence = TrackConfidence::Tentative;
  int hits = 0;             // consecutive associated detections, 0 while coasting
  double last_update = 0.0; // time of last associated detection
  double state_time = 0.0;  // time the position estimate refers to
  int history_len = 0;      // associated detections over the track's life
  std::deque<bool> detection_history;  // most recent last, capped
  Position last_measurement;
  std::string last_measure_id;

  bool confirmed() const { return confidence == TrackConfidence::Confirmed; }
};

struct TrackSet {
  std::vector<Track> tracks;  // ascending track_id
  int next_id = 1;            // ids are never recycled within a run

  const Track* find(int track_id) const;
};

struct TrackingConfig {
  int confirm_m = 3;
  double drop_after = 5.0;      // s
  double gate_radius = 200.0;   // m
  double alpha = 0.5;
  double beta = 0.1;
  double update_rate_min = 1.0; // Hz
  double pos_accuracy_y = 50.0; // m
  double vel_accuracy_z = 10.0; // m/s

  bool valid() const {
    return alpha > 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 2.0 && confirm_m >= 1 &&
           drop_after > 0.0 && gate_radius > 0.0 && update_rate_min > 0.0;
  }
};

inline constexpr std::size_t kDetectionHistoryCap = 32;

/// Nearest-neighbour association inside gate_radius (ties to the lower
/// track_id), alpha-beta update of associated tracks, two-point differencing
/// on a track's second hit, and a new Tentative track per unassociated
/// detection. Tracks not associated this call are left untouched; follow with
/// coast_and_drop.
TrackSet associate_and_update(const TrackSet& tracks, const DetectionOutput& detections, double t,
                              const TrackingConfig& cfg);

/// Dead-reckons every track not updated at t and removes those whose last
/// association is more than drop_after seconds old.
TrackSet coast_and_drop(const TrackSet& tracks, double t, const TrackingConfig& cfg);

struct AccuracyReport {
  bool pass = false;
  double position_error = 0.0;
  double velocity_error = 0.0;
};

AccuracyReport check_accuracy(const Track& track, const Position& truth_pos,
                              const Velocity& truth_vel, const TrackingConfig& cfg);

/// Bit-exact text dump (hex floats) used for determinism comparisons.
std::string serialize(const TrackSet& tracks);

}  // namespace cas
