#include "cas/maneuver.hpp"

#include <array>

#include <fmt/format.h>

namespace cas {

namespace {

constexpr std::array<std::pair<ManeuverKind, std::string_view>, 6> kKindNames{{
    {ManeuverKind::ClimbRight, "ClimbRight"},
    {ManeuverKind::DescendRight, "DescendRight"},
    {ManeuverKind::ClimbLeft, "ClimbLeft"},
    {ManeuverKind::DescendLeft, "DescendLeft"},
    {ManeuverKind::LevelRight, "LevelRight"},
    {ManeuverKind::LevelLeft, "LevelLeft"},
}};

// Relative altitudes inside this band count as co-altitude.
constexpr double kLevelBand = 1e-6;  // m

Payload maneuver_payload(const Maneuver& m) {
  return {{"kind", std::string(to_string(m.kind))},
          {"maneuver_id", fmt_int(m.maneuver_id)},
          {"track_id", fmt_int(m.threat_track_id)}};
}

void emit_command(TraceBus* bus, const Command& c) {
  if (c.kind == CommandKind::Terminate) {
    emit_to(bus, c.t, EventKind::ManeuverTerminated, maneuver_payload(c.maneuver));
  } else {
    Payload p = maneuver_payload(c.maneuver);
    p["command"] = std::string(to_string(c.kind));
    emit_to(bus, c.t, EventKind::CommandIssued, std::move(p));
  }
}

const ThreatAssessment* find_threat(std::span<const ThreatAssessment> assessments, int track_id) {
  for (const auto& a : assessments)
    if (a.track_id == track_id && a.is_collision_threat) return &a;
  return nullptr;
}

bool any_threat(std::span<const ThreatAssessment> assessments) {
  for (const auto& a : assessments)
    if (a.is_collision_threat) return true;
  return false;
}

}  // namespace

std::string_view to_string(ManeuverKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "Unknown";
}

std::optional<ManeuverKind> parse_maneuver_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

TurnDirection turn_of(ManeuverKind k) {
  switch (k) {
    case ManeuverKind::ClimbRight:
    case ManeuverKind::DescendRight:
    case ManeuverKind::LevelRight: return TurnDirection::Right;
    default: return TurnDirection::Left;
  }
}

VerticalSense vertical_of(ManeuverKind k) {
  switch (k) {
    case ManeuverKind::ClimbRight:
    case ManeuverKind::ClimbLeft: return VerticalSense::Climb;
    case ManeuverKind::DescendRight:
    case ManeuverKind::DescendLeft: return VerticalSense::Descend;
    default: return VerticalSense::Level;
  }
}

ManeuverKind select_kind(double threat_azimuth_deg, double threat_relative_altitude) {
  const bool right = !(threat_azimuth_deg > 0.0);
  if (threat_relative_altitude > kLevelBand)
    return right ? ManeuverKind::DescendRight : ManeuverKind::DescendLeft;
  if (threat_relative_altitude < -kLevelBand)
    return right ? ManeuverKind::ClimbRight : ManeuverKind::ClimbLeft;
  return right ? ManeuverKind::LevelRight : ManeuverKind::LevelLeft;
}

std::string_view to_string(CommandKind k) {
  switch (k) {
    case CommandKind::Initiate: return "Initiate";
    case CommandKind::Continue: return "Continue";
    case CommandKind::Terminate: return "Terminate";
  }
  return "Unknown";
}

const Maneuver* ManeuverPlan::candidate_for(int track_id) const {
  for (const auto& m : candidates)
    if (m.threat_track_id == track_id) return &m;
  return nullptr;
}

ManeuverPlan determine(std::span<const ThreatAssessment> prioritized, const OwnState& own,
                       const TrackSet& tracks, double t, TraceBus* bus) {
  ManeuverPlan plan;
  for (const auto& threat : prioritized) {
    const Track* tr = tracks.find(threat.track_id);
    if (!tr) throw std::invalid_argument(fmt::format("threat track {} not in track set", threat.track_id));
    double az = 0.0;
    try {
      az = to_body_spherical(own.position, own.orientation, tr->position).azimuth;
    } catch (const ZeroRangeError&) {
    }
    Maneuver m;
    m.kind = select_kind(az, tr->position.z - own.position.z);
    m.threat_track_id = threat.track_id;
    m.priority_ttc = threat.time_to_collision;
    m.started_at = t;
    plan.candidates.push_back(m);
  }
  if (!plan.candidates.empty()) {
    plan.selected = plan.candidates.front();
    emit_to(bus, t, EventKind::ManeuverDetermined,
            {{"candidates", fmt_int(static_cast<long long>(plan.candidates.size()))},
             {"kind", std::string(to_string(plan.selected->kind))},
             {"track_id", fmt_int(plan.selected->threat_track_id)}});
  }
  return plan;
}

ActiveManeuverState reassess_update(const ActiveManeuverState& state, const ManeuverPlan& plan,
                                    std::span<const ThreatAssessment> assessments, double) {
  ActiveManeuverState out = state;
  if (!out.active) return out;
  if (const auto* a = find_threat(assessments, out.active->threat_track_id))
    out.active->priority_ttc = a->time_to_collision;
  if (const auto* c = plan.candidate_for(out.active->threat_track_id)) out.active->kind = c->kind;
  return out;
}

StepResult step_command(const ActiveManeuverState& state, const ManeuverPlan& plan,
                        std::span<const ThreatAssessment> assessments, double t,
                        const ManeuverConfig& cfg, TraceBus* bus) {
  StepResult res;
  res.state = state;

  if (plan.selected && !find_threat(assessments, plan.selected->threat_track_id))
    throw IllegalTransition(fmt::format("selected maneuver targets track {} which is not a threat",
                                        plan.selected->threat_track_id));
  const bool threats = any_threat(assessments);
  if (threats && !plan.selected)
    throw IllegalTransition("collision threats present but no maneuver was determined");

  auto initiate = [&](const Maneuver& candidate) {
    Maneuver m = candidate;
    m.maneuver_id = res.state.next_maneuver_id++;
    m.is_active = true;
    m.started_at = t;
    res.state.active = m;
    res.commands.push_back({CommandKind::Initiate, m, t});
  };
  auto terminate = [&]() {
    Maneuver m = *res.state.active;
    m.is_active = false;
    res.state.active.reset();
    res.commands.push_back({CommandKind::Terminate, m, t});
  };

  if (!state.active) {
    if (plan.selected) initiate(*plan.selected);
  } else if (!threats) {
    terminate();
  } else if (find_threat(assessments, state.active->threat_track_id)) {
    res.state = reassess_update(state, plan, assessments, t);
    const Maneuver& active = *res.state.active;
    const bool other_head = plan.selected->threat_track_id != active.threat_track_id;
    if (other_head && plan.selected->priority_ttc < state.active->priority_ttc - cfg.hysteresis) {
      terminate();
      initiate(*plan.selected);
    } else {
      res.commands.push_back({CommandKind::Continue, active, t});
    }
  } else {
    // Active threat is gone but others remain: superseded.
    terminate();
    initiate(*plan.selected);
  }

  for (const auto& c : res.commands) emit_command(bus, c);
  return res;
}

std::string_view to_string(Transition t) {
  switch (t) {
    case Transition::Idle: return "Idle";
    case Transition::Initiate: return "Initiate";
    case Transition::Continue: return "Continue";
    case Transition::Override: return "Override";
    case Transition::Terminate: return "Terminate";
  }
  return "Unknown";
}

Transition classify(std::span<const Command> cmds) {
  if (cmds.empty()) return Transition::Idle;
  if (cmds.size() == 1) {
    switch (cmds[0].kind) {
      case CommandKind::Initiate: return Transition::Initiate;
      case CommandKind::Continue: return Transition::Continue;
      case CommandKind::Terminate: return Transition::Terminate;
    }
  }
  if (cmds.size() == 2 && cmds[0].kind == CommandKind::Terminate &&
      cmds[1].kind == CommandKind::Initiate)
    return Transition::Override;
  throw IllegalTransition("command sequence matches no declared transition");
}

}  // namespace cas
