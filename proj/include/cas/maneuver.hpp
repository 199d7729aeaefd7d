#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cas/assessment.hpp"
#include "cas/core_types.hpp"
#include "cas/event_log.hpp"
#include "cas/tracking.hpp"

namespace cas {

enum class ManeuverKind { ClimbRight, DescendRight, ClimbLeft, DescendLeft, LevelRight, LevelLeft };
std::string_view to_string(ManeuverKind k);
std::optional<ManeuverKind> parse_maneuver_kind(std::string_view s);

enum class TurnDirection { Left, Right };
enum class VerticalSense { Climb, Descend, Level };
TurnDirection turn_of(ManeuverKind k);
VerticalSense vertical_of(ManeuverKind k);

/// Avoidance rule: turn away from the side the threat is on (dead ahead
/// turns right), and move vertically away from the threat's relative
/// altitude (level when co-altitude).
ManeuverKind select_kind(double threat_azimuth_deg, double threat_relative_altitude);

struct Maneuver {
  int maneuver_id = 0;  // 0 until commanded
  ManeuverKind kind = ManeuverKind::LevelRight;
  int threat_track_id = 0;
  bool is_active = false;
  double priority_ttc = 0.0;
  double started_at = 0.0;

  friend bool operator==(const Maneuver&, const Maneuver&) = default;
};

enum class CommandKind { Initiate, Continue, Terminate };
std::string_view to_string(CommandKind k);

struct Command {
  CommandKind kind = CommandKind::Initiate;
  Maneuver maneuver;
  double t = 0.0;
};

struct OwnState {
  Position position;
  Orientation orientation;
  Velocity velocity;
};

struct ManeuverPlan {
  std::vector<Maneuver> candidates;  // one per threat, priority order
  std::optional<Maneuver> selected;  // candidate for the head threat

  bool empty() const { return candidates.empty(); }
  const Maneuver* candidate_for(int track_id) const;
};

/// Builds one candidate per prioritised threat and selects the head one.
/// Emits ManeuverDetermined when the plan is non-empty.
ManeuverPlan determine(std::span<const ThreatAssessment> prioritized, const OwnState& own,
                       const TrackSet& tracks, double t = 0.0, TraceBus* bus = nullptr);

struct ActiveManeuverState {
  std::optional<Maneuver> active;
  int next_maneuver_id = 1;
};

struct ManeuverConfig {
  double hysteresis = 0.5;  // s, override needs TTC below active priority_ttc - hysteresis
};

class IllegalTransition : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct StepResult {
  std::vector<Command> commands;
  ActiveManeuverState state;
};

/// Command state machine, called once per tick after assessment.
///   idle,   no threats            -> nothing
///   idle,   plan                  -> Initiate(selected)
///   active, its threat persists   -> Continue
///   active, superseded            -> Terminate(old), Initiate(selected)
///   active, no threats            -> Terminate
/// "Superseded" means the selected threat has a TTC below the active
/// priority_ttc minus hysteresis, or the active threat no longer exists while
/// others do.
StepResult step_command(const ActiveManeuverState& state, const ManeuverPlan& plan,
                        std::span<const ThreatAssessment> assessments, double t,
                        const ManeuverConfig& cfg = {}, TraceBus* bus = nullptr);

/// Refreshes priority_ttc and kind of the active maneuver from the latest
/// assessment and plan. The maneuver identity is kept.
ActiveManeuverState reassess_update(const ActiveManeuverState& state, const ManeuverPlan& plan,
                                    std::span<const ThreatAssessment> assessments, double t);

enum class Transition { Idle, Initiate, Continue, Override, Terminate };
std::string_view to_string(Transition t);

/// Classifies a command sequence into one of the declared transitions.
/// Throws IllegalTransition for any other shape.
Transition classify(std::span<const Command> commands);

}  // namespace cas
