#include "cas/detection.hpp"

#include <fmt/format.h>

namespace cas {

std::string_view to_string(SensorSource s) {
  return s == SensorSource::Primary ? "Primary" : "Secondary";
}

std::string_view to_string(SensorInputError::Kind k) {
  switch (k) {
    case SensorInputError::Kind::RangeOutOfBounds: return "RangeOutOfBounds";
    case SensorInputError::Kind::AzimuthOutOfBounds: return "AzimuthOutOfBounds";
    case SensorInputError::Kind::ElevationOutOfBounds: return "ElevationOutOfBounds";
  }
  return "Unknown";
}

SensorInputError::SensorInputError(Kind kind, double value)
    : std::runtime_error(fmt::format("{}: {}", to_string(kind), value)), kind_(kind), value_(value) {}

ValidatedInput validate_sensor_input(const SensorInput& input) {
  using K = SensorInputError::Kind;
  // Written as negated inclusive checks so that NaN is rejected too.
  if (!(input.detection_range >= kMinDetectionRange && input.detection_range <= kMaxDetectionRange))
    throw SensorInputError(K::RangeOutOfBounds, input.detection_range);
  if (!(input.azimuth_for >= -kMaxAzimuthFor && input.azimuth_for <= kMaxAzimuthFor))
    throw SensorInputError(K::AzimuthOutOfBounds, input.azimuth_for);
  if (!(input.elevation_for >= -kMaxElevationFor && input.elevation_for <= kMaxElevationFor))
    throw SensorInputError(K::ElevationOutOfBounds, input.elevation_for);
  return ValidatedInput(input);
}

StatusOutcome handle_sensor_status(const SensorInput& input, TraceBus* bus) {
  if (input.sensor_status) return ProceedWithInput{input};
  emit_to(bus, input.t, EventKind::SensorAlert,
          {{"reason", "SensorStatus"}, {"source", std::string(to_string(input.source_id))}});
  return AlertRaised{input.t};
}

SurveillanceVolume SurveillanceVolume::symmetric(double range, double az_half, double el_half) {
  az_half = std::abs(az_half);
  el_half = std::abs(el_half);
  return {range, -az_half, az_half, -el_half, el_half};
}

SurveillanceVolume SurveillanceVolume::from_input(const SensorInput& in) {
  return symmetric(in.detection_range, in.azimuth_for, in.elevation_for);
}

bool in_surveillance_volume(const SurveillanceVolume& vol, const BodySpherical& sph) {
  return sph.range <= vol.detection_range && sph.azimuth >= vol.min_azimuth &&
         sph.azimuth <= vol.max_azimuth && sph.elevation >= vol.min_elevation &&
         sph.elevation <= vol.max_elevation;
}

ConflictRegion compute_conflict_region(const Position& current, double horizontal_radius,
                                       double vertical_half_height) {
  if (!(horizontal_radius > 0.0))
    throw NonPositiveDimension(fmt::format("horizontal_radius must be > 0, got {}", horizontal_radius));
  if (!(vertical_half_height > 0.0))
    throw NonPositiveDimension(
        fmt::format("vertical_half_height must be > 0, got {}", vertical_half_height));
  return {current, horizontal_radius, vertical_half_height};
}

bool position_in_conflict_region(const ConflictRegion& region, const Position& p) {
  const Vec3 d = p - region.center;
  return d.horizontal_norm() <= region.horizontal_radius &&
         std::abs(d.z) <= region.vertical_half_height;
}

DetectionOutput detect(const ValidatedInput& input, const RegionParams& region_params,
                       const SurveillanceVolume& volume, TraceBus* bus) {
  const SensorInput& in = input.input();
  DetectionOutput out;
  out.current_position = input.current_position();
  out.t = in.t;

  const ConflictRegion region = compute_conflict_region(
      out.current_position, region_params.horizontal_radius, region_params.vertical_half_height);

  for (const SensorMeasure& m : input.measures()) {
    const Position traffic_pos = out.current_position + m.relative_offset;
    if (traffic_pos == out.current_position) continue;  // no line of sight to a zero offset
    const BodySpherical sph =
        to_body_spherical(out.current_position, input.orientation(), traffic_pos);
    const bool potential_traffic = position_in_conflict_region(region, traffic_pos);
    if (potential_traffic && in_surveillance_volume(volume, sph))
      out.traffic.push_back({m.measure_id, traffic_pos});
  }
  out.traffic_detected = !out.traffic.empty();

  for (const auto& tr : out.traffic) {
    emit_to(bus, in.t, EventKind::TrafficDetected,
            {{"measure_id", tr.measure_id},
             {"x", fmt_real(tr.position.x)},
             {"y", fmt_real(tr.position.y)},
             {"z", fmt_real(tr.position.z)}});
  }
  return out;
}

DetectionOutput detect(const ValidatedInput& input, const RegionParams& region, TraceBus* bus) {
  return detect(input, region, SurveillanceVolume::from_input(input.input()), bus);
}

std::vector<std::string> ConfigReport::failures() const {
  std::vector<std::string> f;
  if (!range_ok) f.emplace_back("cooperative_range");
  if (!azimuth_ok) f.emplace_back("azimuth_for");
  if (!elevation_ok) f.emplace_back("elevation_for");
  if (!rate_ok) f.emplace_back("update_period");
  return f;
}

ConfigReport validate_cooperative_config(double coop_range, double az_for, double el_for,
                                         double update_period) {
  ConfigReport r;
  r.range_ok = coop_range >= kMinCooperativeRange;
  r.azimuth_ok = az_for >= kMinCooperativeAzimuthFor;
  r.elevation_ok = el_for >= kMinCooperativeElevationFor;
  r.rate_ok = update_period > 0.0 && update_period <= kMaxUpdatePeriod;
  return r;
}

CadenceReport check_cadence(const std::vector<double>& timestamps, double max_gap) {
  // Absorbs rounding in timestamps built as tick * dt.
  constexpr double kSlack = 1e-9;
  CadenceReport rep;
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1]))
      throw NonMonotonicTimestamps(
          fmt::format("timestamp {} does not follow {}", timestamps[i], timestamps[i - 1]));
    const CadenceGap g{timestamps[i - 1], timestamps[i]};
    if (g.gap() > max_gap + kSlack) rep.violations.push_back(g);
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace cas
