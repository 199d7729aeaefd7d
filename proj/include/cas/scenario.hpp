#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cas/assessment.hpp"
#include "cas/core_types.hpp"
#include "cas/detection.hpp"
#include "cas/maneuver.hpp"
#include "cas/tracking.hpp"

namespace cas {

struct VelocitySegment {
  double t_start = 0.0;
  Velocity velocity;
};

struct IntruderSpec {
  std::string id;
  Position initial;
  std::vector<VelocitySegment> segments;  // ascending t_start, first at 0

  /// Exact piecewise-linear ground truth.
  Position position_at(double t) const;
  Velocity velocity_at(double t) const;
};

enum class FaultKind {
  SensorFailure,
  SoftwareErrorDrop,
  CommDelay,
  ConfigError,
  PhysicalObstruction,
  PhantomDetection,
  StageDisable,
};
std::string_view to_string(FaultKind k);

struct FaultInjection {
  FaultKind kind = FaultKind::SensorFailure;
  double t_start = 0.0;
  double t_end = 0.0;
  std::map<std::string, std::string> params;

  bool active(double t) const;
  std::string param(const std::string& key, const std::string& fallback = "") const;
  double param_real(const std::string& key, double fallback) const;
};

struct SensorSpec {
  double detection_range = 3000.0;
  double azimuth_for = 110.0;
  double elevation_for = 15.0;
  CooperativeConfig cooperative;
};

struct OwnSpec {
  Position position;
  Velocity velocity;
};

struct Scenario {
  std::string name;
  double dt = 0.1;
  double duration = 60.0;
  SensorSpec sensor;
  RegionParams region;
  OwnSpec own;
  std::vector<IntruderSpec> intruders;
  std::vector<FaultInjection> faults;

  long long tick_count() const;  // ticks 0..tick_count()-1 cover [0, duration]
  double tick_time(long long k) const { return static_cast<double>(k) * dt; }
};

class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ScenarioValidationError : public std::runtime_error {
 public:
  ScenarioValidationError(std::string field, const std::string& reason)
      : std::runtime_error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Line-oriented format: `#` comments, sections [scenario], [sensor],
/// [region], [own], [intruder <id>], [fault <n>]; entries `key = value`;
/// intruder velocity segments as `segment = t_start vx vy vz`.
Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Tunables of the processing chain and the simulated airframe.
struct PipelineConfig {
  TrackingConfig tracking;
  AssessmentParams assessment;
  ManeuverConfig maneuver;
  double self_test_period = 10.0;  // s
  double speed_bound = kDefaultSpeedSanityBound;
  double turn_rate = 3.0;          // deg/s while maneuvering
  double vertical_rate = 5.0;      // m/s while climbing/descending
  int substeps = 10;               // kinematic sub-steps per tick
};

/// Applies `key = value` overrides (section headers are ignored).
void apply_pipeline_overrides(std::string_view text, PipelineConfig& cfg);

}  // namespace cas
