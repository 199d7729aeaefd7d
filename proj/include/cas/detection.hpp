#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cas/core_types.hpp"
#include "cas/event_log.hpp"

namespace cas {

enum class SensorSource { Primary, Secondary };
std::string_view to_string(SensorSource s);

struct SensorMeasure {
  Vec3 relative_offset;  // world frame, from own position
  std::string measure_id;
};

/// One sensor frame as delivered to traffic detection.
struct SensorInput {
  bool sensor_status = true;
  double detection_range = 3000.0;  // m
  double azimuth_for = 110.0;       // deg, symmetric half-width
  double elevation_for = 15.0;      // deg, symmetric half-width
  Orientation orientation;
  Position position;
  std::vector<SensorMeasure> measures;
  double t = 0.0;
  SensorSource source_id = SensorSource::Primary;
};

// Sensor configuration bounds accepted by validate_sensor_input (inclusive).
inline constexpr double kMinDetectionRange = 0.2;
inline constexpr double kMaxDetectionRange = 3000.0;
inline constexpr double kMaxAzimuthFor = 110.0;
inline constexpr double kMaxElevationFor = 15.0;

class SensorInputError : public std::runtime_error {
 public:
  enum class Kind { RangeOutOfBounds, AzimuthOutOfBounds, ElevationOutOfBounds };
  SensorInputError(Kind kind, double value);
  Kind kind() const { return kind_; }
  double value() const { return value_; }

 private:
  Kind kind_;
  double value_;
};
std::string_view to_string(SensorInputError::Kind k);

/// A SensorInput that passed validate_sensor_input. Only constructible there.
class ValidatedInput {
 public:
  const SensorInput& input() const { return input_; }
  // Orientation, position and measures as retrieved from the validated frame.
  const Orientation& orientation() const { return input_.orientation; }
  const Position& current_position() const { return input_.position; }
  const std::vector<SensorMeasure>& measures() const { return input_.measures; }

 private:
  explicit ValidatedInput(SensorInput in) : input_(std::move(in)) {}
  friend ValidatedInput validate_sensor_input(const SensorInput& input);
  SensorInput input_;
};

/// Throws SensorInputError naming the first offending value.
ValidatedInput validate_sensor_input(const SensorInput& input);

struct ProceedWithInput {
  SensorInput input;
};
struct AlertRaised {
  double t = 0.0;
};
using StatusOutcome = std::variant<ProceedWithInput, AlertRaised>;

/// Healthy sensor: hand the frame on. Otherwise a SensorAlert is emitted.
StatusOutcome handle_sensor_status(const SensorInput& input, TraceBus* bus = nullptr);

struct SurveillanceVolume {
  double detection_range = 3000.0;
  double min_azimuth = -110.0;
  double max_azimuth = 110.0;
  double min_elevation = -15.0;
  double max_elevation = 15.0;

  bool valid() const {
    return detection_range > 0.0 && min_azimuth <= max_azimuth && min_elevation <= max_elevation;
  }
  static SurveillanceVolume symmetric(double range, double az_half, double el_half);
  static SurveillanceVolume from_input(const SensorInput& in);
};

bool in_surveillance_volume(const SurveillanceVolume& vol, const BodySpherical& sph);

struct ConflictRegion {
  Position center;
  double horizontal_radius = 500.0;
  double vertical_half_height = 100.0;
};

struct RegionParams {
  double horizontal_radius = 500.0;
  double vertical_half_height = 100.0;
};

class NonPositiveDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ConflictRegion compute_conflict_region(const Position& current, double horizontal_radius,
                                       double vertical_half_height);

bool position_in_conflict_region(const ConflictRegion& region, const Position& p);

struct DetectedTraffic {
  std::string measure_id;
  Position position;
  friend bool operator==(const DetectedTraffic&, const DetectedTraffic&) = default;
};

struct DetectionOutput {
  bool traffic_detected = false;
  std::vector<DetectedTraffic> traffic;
  Position current_position;
  double t = 0.0;
};

/// Traffic position = current position + measure offset. A measure counts as
/// detected traffic iff it lies in the surveillance volume AND the conflict
/// region. One TrafficDetected event is emitted per detected measure.
DetectionOutput detect(const ValidatedInput& input, const RegionParams& region,
                       const SurveillanceVolume& volume, TraceBus* bus = nullptr);
DetectionOutput detect(const ValidatedInput& input, const RegionParams& region,
                       TraceBus* bus = nullptr);

// Minimum cooperative-channel performance.
inline constexpr double kMinCooperativeRange = nm_to_meters(20.0);  // 37040 m
inline constexpr double kMinCooperativeAzimuthFor = 110.0;
inline constexpr double kMinCooperativeElevationFor = 15.0;
inline constexpr double kMaxUpdatePeriod = 1.0;  // s, i.e. >= 1.0 Hz

struct CooperativeConfig {
  double range = kMinCooperativeRange;
  double azimuth_for = kMinCooperativeAzimuthFor;
  double elevation_for = kMinCooperativeElevationFor;
  double update_period = kMaxUpdatePeriod;
};

struct ConfigReport {
  bool range_ok = false;
  bool azimuth_ok = false;
  bool elevation_ok = false;
  bool rate_ok = false;

  bool all_pass() const { return range_ok && azimuth_ok && elevation_ok && rate_ok; }
  std::vector<std::string> failures() const;
};

ConfigReport validate_cooperative_config(double coop_range, double az_for, double el_for,
                                         double update_period);
inline ConfigReport validate_cooperative_config(const CooperativeConfig& c) {
  return validate_cooperative_config(c.range, c.azimuth_for, c.elevation_for, c.update_period);
}

class NonMonotonicTimestamps : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CadenceGap {
  double from = 0.0;
  double to = 0.0;
  double gap() const { return to - from; }
};

struct CadenceReport {
  bool pass = true;
  std::vector<CadenceGap> violations;
};

/// Every consecutive gap must be <= max_gap (1.0 s by default).
CadenceReport check_cadence(const std::vector<double>& timestamps,
                            double max_gap = kMaxUpdatePeriod);

}  // namespace cas
