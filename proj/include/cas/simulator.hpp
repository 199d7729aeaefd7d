#pragma once

#include <set>
#include <string>
#include <vector>

#include "cas/core_types.hpp"
#include "cas/detection.hpp"
#include "cas/monitors.hpp"
#include "cas/scenario.hpp"
#include "cas/tracking.hpp"

namespace cas {

/// Own-ship state at the start of a tick (before that tick's maneuver is flown).
struct OwnTruth {
  double t = 0.0;
  Position position;
  Orientation orientation;
  Velocity velocity;
};

struct RunResult {
  std::vector<TraceEvent> trace;
  std::vector<TickSnapshot> snapshots;  // one per tick
  std::vector<std::string> gclog;       // records accepted by the ground link
  std::string csv;
  std::vector<OwnTruth> own;            // one per tick
  double min_separation = 0.0;          // +inf without intruders
  TrackSet final_tracks;
  int phantom_tracks_confirmed = 0;
  int phantom_commands = 0;
};

/// Closed-loop run: ground truth -> sensor frames (with faults) -> health ->
/// detection -> tracking -> assessment -> maneuver -> own-ship kinematics.
RunResult run(const Scenario& scenario, const PipelineConfig& cfg = {});

/// Brute-force reference for one frame: ids of the measures that fall inside
/// both the surveillance volume and the conflict region.
std::set<std::string> oracle_detect(const SensorInput& frame, const RegionParams& region);

/// Reference detection straight from scenario ground truth, for the own
/// pose recorded at time t.
std::set<std::string> oracle_detect(const Scenario& scenario, const OwnTruth& own);

/// Minimum own-intruder distance of the closed-loop run sampled at dt/substeps.
double oracle_min_separation(const Scenario& scenario, const PipelineConfig& cfg = {});

/// Trace / gclog / CSV file bodies.
std::string trace_text(const RunResult& r);
std::string gclog_text(const RunResult& r);

}  // namespace cas
