#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <ranges>
#include <stdexcept>
#include <string>
#include <vector>

#include "cas/assessment.hpp"
#include "cas/detection.hpp"
#include "cas/event_log.hpp"
#include "cas/maneuver.hpp"
#include "cas/tracking.hpp"

namespace cas {

enum class Component { PrimarySensor, SecondarySensor, Detection, Tracking, Assessment, Maneuver, GroundLink };
enum class HealthStatus { Ok, Degraded, Failed };
std::string_view to_string(Component c);
std::string_view to_string(HealthStatus s);

struct ComponentHealth {
  Component component = Component::Detection;
  HealthStatus status = HealthStatus::Ok;
  double last_checked = 0.0;
};

// ---------------------------------------------------------------------------
// Sensor data integrity

enum class IntegrityViolation { NonFiniteField, OutOfOrderTimestamp, OwnSpeedExceeded, DuplicateMeasure, ZeroOffset };
std::string_view to_string(IntegrityViolation v);

struct IntegrityFinding {
  IntegrityViolation kind;
  std::string detail;
};

struct IntegrityVerdict {
  bool pass = true;
  std::vector<IntegrityFinding> findings;

  bool has(IntegrityViolation v) const;
};

/// Previous accepted frame, used for timestamp ordering and own-speed checks.
struct IntegrityContext {
  std::optional<double> previous_t;
  std::optional<Position> previous_position;
  double speed_bound = kDefaultSpeedSanityBound;
};

IntegrityVerdict integrity_check(const SensorInput& input, const IntegrityContext& ctx = {});

// ---------------------------------------------------------------------------
// Self-tests

struct SelfTestRegistry {
  CooperativeConfig cooperative;
  TrackingConfig tracking;
  AssessmentParams assessment;
  ManeuverConfig maneuver;
  double frame_period = 0.1;       // s, nominal sensor frame period
  double period = 10.0;            // s, periodic self-test interval
  double cpa_fixture_bias = 0.0;   // fault hook: perturbs the CPA fixture input
  std::vector<double> frame_times; // delivered sensor frames
  double last_periodic = 0.0;
  std::map<Component, ComponentHealth> health;
};

struct SelfTestReport {
  bool pass = true;
  double t = 0.0;
  std::vector<ComponentHealth> components;
  std::vector<std::string> failures;  // component names, plus "Cadence"

  bool names(std::string_view what) const;
};

/// Runs each component's built-in check and emits SelfTestResult.
SelfTestReport startup_self_test(SelfTestRegistry& registry, double t = 0.0, TraceBus* bus = nullptr);

/// Fires when t crosses a multiple of registry.period since the last run.
/// Adds a cadence check over the frames delivered in the last window.
std::optional<SelfTestReport> periodic_self_test(SelfTestRegistry& registry, double t,
                                                 TraceBus* bus = nullptr);

// ---------------------------------------------------------------------------
// Redundancy

struct SourceSelection {
  SensorSource active = SensorSource::Primary;
  int failover_count = 0;
  friend bool operator==(const SourceSelection&, const SourceSelection&) = default;
};

struct SourceDecision {
  SourceSelection selection;
  bool failed = false;    // neither source usable
  bool switched = false;
};

/// Primary preferred; failover to Secondary is sticky for the rest of the
/// run unless Secondary fails too.
SourceDecision select_source(bool primary_ok, bool secondary_ok, const SourceSelection& current);

// ---------------------------------------------------------------------------
// False-alarm mitigation

/// True iff the last k entries of the detection history are all hits.
template <std::ranges::bidirectional_range R>
bool persistence_filter(const R& history, int k) {
  if (k < 1) throw std::invalid_argument("persistence_filter: k must be >= 1");
  int seen = 0;
  for (auto it = std::ranges::rbegin(history); it != std::ranges::rend(history) && seen < k; ++it) {
    if (!*it) return false;
    ++seen;
  }
  return seen == k;
}

// ---------------------------------------------------------------------------
// Ground link

class SinkUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroundLinkSink {
 public:
  virtual ~GroundLinkSink() = default;
  virtual void append(const std::string& line) = 0;
};

/// Writes lines to a stream; an unavailable sink throws SinkUnavailable.
class StreamSink : public GroundLinkSink {
 public:
  explicit StreamSink(std::ostream& out) : out_(&out) {}
  void append(const std::string& line) override;
  void set_available(bool a) { available_ = a; }

 private:
  std::ostream* out_;
  bool available_ = true;
};

class MemorySink : public GroundLinkSink {
 public:
  void append(const std::string& line) override;
  void set_available(bool a) { available_ = a; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
  bool available_ = true;
};

/// Serialises one record (no trailing newline in the return value) and
/// appends it, newline-terminated, to the sink.
std::string emit_ground_event(const TraceEvent& ev, GroundLinkSink& sink);

/// Event kinds forwarded to the ground station.
bool is_ground_reportable(EventKind kind);

}  // namespace cas
