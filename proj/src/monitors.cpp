#include "cas/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace cas {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::C1: return "C1";
    case Property::C2: return "C2";
    case Property::C3: return "C3";
    case Property::ThreatHandling: return "ThreatHandling";
  }
  return "Unknown";
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Satisfied: return "Satisfied";
    case VerdictStatus::Violated: return "Violated";
    case VerdictStatus::Vacuous: return "Vacuous";
  }
  return "Unknown";
}

namespace {

const std::string& field(const TraceEvent& ev, const std::string& key) {
  auto it = ev.payload.find(key);
  if (it == ev.payload.end())
    throw MalformedTrace(fmt::format("{} at t={} lacks '{}'", to_string(ev.kind), fmt_time(ev.t), key));
  return it->second;
}

int int_field(const TraceEvent& ev, const std::string& key) {
  const std::string& s = field(ev, key);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw MalformedTrace(fmt::format("{} at t={}: '{}' is not an integer", to_string(ev.kind), fmt_time(ev.t), key));
}

double real_field(const TraceEvent& ev, const std::string& key) {
  const std::string& s = field(ev, key);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw MalformedTrace(fmt::format("{} at t={}: '{}' is not a number", to_string(ev.kind), fmt_time(ev.t), key));
}

/// Maps event times onto integer tick indices.
class TickClock {
 public:
  TickClock(std::span<const TraceEvent> trace, std::optional<double> period) {
    double prev = -1.0;
    double min_gap = 0.0;
    for (const auto& ev : trace) {
      if (!std::isfinite(ev.t) || ev.t < 0.0) throw MalformedTrace("non-finite or negative event time");
      if (prev >= 0.0 && ev.t < prev)
        throw MalformedTrace(fmt::format("time goes backwards: {} after {}", fmt_time(ev.t), fmt_time(prev)));
      if (prev >= 0.0 && ev.t > prev && (min_gap == 0.0 || ev.t - prev < min_gap)) min_gap = ev.t - prev;
      prev = ev.t;
    }
    if (period) {
      if (!(*period > 0.0)) throw std::invalid_argument("tick period must be > 0");
      period_ = *period;
    } else {
      // Trace times carry millisecond resolution.
      period_ = min_gap > 0.0 ? std::max(0.001, std::round(min_gap * 1000.0) / 1000.0) : 1.0;
    }
  }
  long long tick(double t) const { return std::llround(t / period_); }

 private:
  double period_ = 1.0;
};

MonitorVerdict violated(Property p, const TickClock& clock, double t, std::string what) {
  return {p, VerdictStatus::Violated, Witness{t, clock.tick(t), std::move(what)}};
}

bool any_in_window(const std::vector<long long>& sorted_ticks, long long from, long long to) {
  auto it = std::lower_bound(sorted_ticks.begin(), sorted_ticks.end(), from);
  return it != sorted_ticks.end() && *it <= to;
}

std::vector<long long> ticks_of(std::span<const TraceEvent> trace, const TickClock& clock, EventKind kind) {
  std::vector<long long> out;
  for (const auto& ev : trace)
    if (ev.kind == kind) out.push_back(clock.tick(ev.t));
  return out;  // already ordered: the trace is time-ordered
}

}  // namespace

MonitorVerdict check_c1(std::span<const TraceEvent> trace, const MonitorConfig& cfg) {
  const TickClock clock(trace, cfg.tick_period);
  const auto commands = ticks_of(trace, clock, EventKind::CommandIssued);
  bool any = false;
  for (const auto& ev : trace) {
    if (ev.kind != EventKind::ThreatIdentified) continue;
    any = true;
    const long long k = clock.tick(ev.t);
    if (!any_in_window(commands, k, k + cfg.horizon_h))
      return violated(Property::C1, clock, ev.t,
                      fmt::format("threat on track {} not commanded within {} ticks",
                                  int_field(ev, "track_id"), cfg.horizon_h));
  }
  return {Property::C1, any ? VerdictStatus::Satisfied : VerdictStatus::Vacuous, std::nullopt};
}

MonitorVerdict check_c2(std::span<const TraceEvent> trace, const MonitorConfig& cfg) {
  const TickClock clock(trace, cfg.tick_period);
  const auto commands = ticks_of(trace, clock, EventKind::CommandIssued);

  // Threat ticks per measure id, linked through CollisionEvaluated (which
  // names both the track and the measure that last fed it).
  std::map<int, std::string> measure_of_track;
  std::map<std::string, std::vector<long long>> threat_ticks;
  std::vector<long long> unlinked_threats;
  for (const auto& ev : trace) {
    if (ev.kind == EventKind::CollisionEvaluated) {
      measure_of_track[int_field(ev, "track_id")] = field(ev, "measure_id");
    } else if (ev.kind == EventKind::ThreatIdentified) {
      auto it = measure_of_track.find(int_field(ev, "track_id"));
      if (it != measure_of_track.end())
        threat_ticks[it->second].push_back(clock.tick(ev.t));
      else
        unlinked_threats.push_back(clock.tick(ev.t));
    }
  }

  bool any = false;
  for (const auto& ev : trace) {
    if (ev.kind != EventKind::TrafficDetected) continue;
    any = true;
    const std::string& m = field(ev, "measure_id");
    const long long k = clock.tick(ev.t);
    const long long end = k + cfg.horizon_h;
    bool obligated = cfg.raw_c2;
    if (!obligated) {
      auto it = threat_ticks.find(m);
      obligated = (it != threat_ticks.end() && any_in_window(it->second, k, end)) ||
                  any_in_window(unlinked_threats, k, end);
    }
    if (obligated && !any_in_window(commands, k, end))
      return violated(Property::C2, clock, ev.t,
                      fmt::format("detection of {} not followed by a command within {} ticks", m,
                                  cfg.horizon_h));
  }
  return {Property::C2, any ? VerdictStatus::Satisfied : VerdictStatus::Vacuous, std::nullopt};
}

MonitorVerdict check_c3(std::span<const TraceEvent> trace, const MonitorConfig& cfg) {
  const TickClock clock(trace, cfg.tick_period);
  std::map<std::string, std::vector<long long>> evaluations;
  for (const auto& ev : trace)
    if (ev.kind == EventKind::CollisionEvaluated)
      evaluations[field(ev, "measure_id")].push_back(clock.tick(ev.t));

  bool any = false;
  for (const auto& ev : trace) {
    if (ev.kind != EventKind::TrafficDetected) continue;
    any = true;
    const std::string& m = field(ev, "measure_id");
    const long long k = clock.tick(ev.t);
    auto it = evaluations.find(m);
    if (it == evaluations.end() || !any_in_window(it->second, k, k + cfg.horizon_h))
      return violated(Property::C3, clock, ev.t,
                      fmt::format("detection of {} not evaluated within {} ticks", m, cfg.horizon_h));
  }
  return {Property::C3, any ? VerdictStatus::Satisfied : VerdictStatus::Vacuous, std::nullopt};
}

MonitorVerdict check_threat_handling(std::span<const TickSnapshot> snapshots) {
  bool any = false;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const TickSnapshot& s = snapshots[i];
    for (const auto& threat : s.threats) {
      if (!threat.is_collision_threat) continue;
      any = true;
      if (s.active_track && *s.active_track == threat.track_id) continue;
      const bool dominated = std::any_of(s.threats.begin(), s.threats.end(), [&](const auto& other) {
        return other.is_collision_threat && other.track_id != threat.track_id &&
               other.threat_level > threat.threat_level &&
               other.time_to_collision < threat.time_to_collision;
      });
      if (dominated) continue;
      return {Property::ThreatHandling, VerdictStatus::Violated,
              Witness{s.t, static_cast<long long>(i),
                      fmt::format("threat on track {} neither handled nor dominated", threat.track_id)}};
    }
  }
  return {Property::ThreatHandling, any ? VerdictStatus::Satisfied : VerdictStatus::Vacuous,
          std::nullopt};
}

std::vector<TickSnapshot> snapshots_from_trace(std::span<const TraceEvent> trace) {
  const TickClock clock(trace, std::nullopt);  // validates ordering
  std::vector<TickSnapshot> out;
  std::optional<int> active;
  for (const auto& ev : trace) {
    if (out.empty() || ev.t != out.back().t) {
      out.push_back({ev.t, {}, std::nullopt});
      active.reset();
    }
    TickSnapshot& s = out.back();
    switch (ev.kind) {
      case EventKind::ThreatIdentified: {
        ThreatAssessment a;
        a.track_id = int_field(ev, "track_id");
        a.time_to_collision = real_field(ev, "ttc");
        const std::string& lvl = field(ev, "level");
        a.threat_level = lvl == "High" ? ThreatLevel::High : lvl == "Low" ? ThreatLevel::Low : ThreatLevel::None;
        a.is_collision_threat = true;
        s.threats.push_back(a);
        break;
      }
      case EventKind::CommandIssued:
        active = int_field(ev, "track_id");
        break;
      case EventKind::ManeuverTerminated:
        if (active && *active == int_field(ev, "track_id")) active.reset();
        break;
      default: break;
    }
    s.active_track = active;
  }
  return out;
}

std::vector<MonitorVerdict> check_all(std::span<const TraceEvent> trace, const MonitorConfig& cfg) {
  const auto snaps = snapshots_from_trace(trace);
  return {check_c1(trace, cfg), check_c2(trace, cfg), check_c3(trace, cfg),
          check_threat_handling(snaps)};
}

std::string format_verdict(const MonitorVerdict& v) {
  std::string s = fmt::format("{:<15} {}", to_string(v.property), to_string(v.status));
  if (v.witness)
    s += fmt::format(" at t={} (tick {}): {}", fmt_time(v.witness->t), v.witness->tick,
                     v.witness->description);
  return s;
}

}  // namespace cas
