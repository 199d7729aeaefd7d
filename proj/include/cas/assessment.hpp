#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "cas/core_types.hpp"
#include "cas/event_log.hpp"
#include "cas/tracking.hpp"

namespace cas {

/// Closest point of approach under linear extrapolation.
struct CpaResult {
  double t_cpa = 0.0;         // s, clamped to >= 0
  double miss_distance = 0.0; // m
  bool closing = false;       // unclamped minimiser lies in the future
};

class ZeroRelativePosition : public std::domain_error {
 public:
  ZeroRelativePosition() : std::domain_error("relative position is zero") {}
};

inline constexpr double kDefaultMinRelativeSpeed = 1e-6;  // m/s

CpaResult cpa(Vec3 rel_pos, Vec3 rel_vel, double eps_v = kDefaultMinRelativeSpeed);

enum class ThreatLevel { None = 0, Low = 1, High = 2 };
std::string_view to_string(ThreatLevel l);

struct ThreatAssessment {
  int track_id = 0;
  ThreatLevel threat_level = ThreatLevel::None;
  double time_to_collision = std::numeric_limits<double>::infinity();
  bool is_collision_threat = false;
  double miss_distance = 0.0;

  friend bool operator==(const ThreatAssessment&, const ThreatAssessment&) = default;
};

struct AssessmentParams {
  double protected_radius = 150.0;  // m
  double horizon = 60.0;            // s
  double t_high = 15.0;             // s
  double eps_v = kDefaultMinRelativeSpeed;
};

class TrackNotConfirmed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A track is a collision threat iff it is closing, its miss distance is
/// within protected_radius and its CPA lies within the horizon. Emits
/// CollisionEvaluated, and ThreatIdentified for threats.
ThreatAssessment evaluate(const Position& own_pos, const Velocity& own_vel, const Track& track,
                          const AssessmentParams& params, double t = 0.0, TraceBus* bus = nullptr);

/// Evaluates every confirmed track (in track_id order). Events are emitted in
/// a fixed order: all CollisionEvaluated first, then ThreatIdentified in
/// priority order.
std::vector<ThreatAssessment> evaluate_all(const Position& own_pos, const Velocity& own_vel,
                                           const TrackSet& tracks, const AssessmentParams& params,
                                           double t, TraceBus* bus = nullptr);

/// Strict weak order used by prioritize: ascending TTC, then higher level,
/// then lower track_id.
bool higher_priority(const ThreatAssessment& a, const ThreatAssessment& b);

/// Threat subset, shortest time to collision first.
std::vector<ThreatAssessment> prioritize(std::span<const ThreatAssessment> assessments);

}  // namespace cas
