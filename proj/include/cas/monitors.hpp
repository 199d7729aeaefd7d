#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cas/assessment.hpp"
#include "cas/core_types.hpp"

namespace cas {

enum class Property { C1, C2, C3, ThreatHandling };
enum class VerdictStatus { Satisfied, Violated, Vacuous };
std::string_view to_string(Property p);
std::string_view to_string(VerdictStatus s);

struct Witness {
  double t = 0.0;
  long long tick = 0;
  std::string description;
};

struct MonitorVerdict {
  Property property = Property::C1;
  VerdictStatus status = VerdictStatus::Vacuous;
  std::optional<Witness> witness;  // present iff Violated
};

struct MonitorConfig {
  int horizon_h = 20;                 // ticks allowed for "eventually"
  bool raw_c2 = false;                // unguarded c2 semantics
  std::optional<double> tick_period;  // inferred from the trace when unset
};

class MalformedTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every ThreatIdentified is followed within horizon_h ticks by a CommandIssued.
MonitorVerdict check_c1(std::span<const TraceEvent> trace, const MonitorConfig& cfg = {});

/// Every TrafficDetected is followed within horizon_h ticks by a
/// CommandIssued. Guarded (default): the obligation only holds when the
/// detected traffic becomes a collision threat within that window.
MonitorVerdict check_c2(std::span<const TraceEvent> trace, const MonitorConfig& cfg = {});

/// Every TrafficDetected is followed within horizon_h ticks by a
/// CollisionEvaluated for the same measure.
MonitorVerdict check_c3(std::span<const TraceEvent> trace, const MonitorConfig& cfg = {});

/// End-of-tick view of collision threats and the active maneuver.
struct TickSnapshot {
  double t = 0.0;
  std::vector<ThreatAssessment> threats;
  std::optional<int> active_track;
};

/// Each threat is either targeted by the active maneuver or dominated by a
/// threat with strictly higher level AND strictly smaller time to collision.
MonitorVerdict check_threat_handling(std::span<const TickSnapshot> snapshots);

/// Rebuilds per-tick snapshots from ThreatIdentified / CommandIssued /
/// ManeuverTerminated events.
std::vector<TickSnapshot> snapshots_from_trace(std::span<const TraceEvent> trace);

std::vector<MonitorVerdict> check_all(std::span<const TraceEvent> trace, const MonitorConfig& cfg = {});

std::string format_verdict(const MonitorVerdict& v);

}  // namespace cas
