#include "cas/core_types.hpp"

#include <array>
#include <regex>

#include <fmt/format.h>

namespace cas {

double normalize_angle_deg(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a <= -180.0) a += 360.0;
  if (a > 180.0) a -= 360.0;
  return a;
}

double wrap_heading_deg(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a < 0.0) a += 360.0;
  if (a >= 360.0) a -= 360.0;
  return a;
}

BodySpherical to_body_spherical(const Position& own_pos, const Orientation& own_orient,
                                const Position& target) {
  if (!own_pos.finite() || !target.finite() || !std::isfinite(own_orient.heading) ||
      !std::isfinite(own_orient.pitch)) {
    throw std::invalid_argument("to_body_spherical: non-finite input");
  }
  const Vec3 d = target - own_pos;
  const double range = d.norm();
  if (range == 0.0) throw ZeroRangeError();

  // Compass bearing of the line of sight, then relative to the flight path.
  const double bearing = rad2deg(std::atan2(d.x, d.y));
  const double azimuth = normalize_angle_deg(bearing - own_orient.heading);
  const double world_elev = rad2deg(std::atan2(d.z, d.horizontal_norm()));
  double elevation = world_elev - own_orient.pitch;
  if (elevation > 90.0) elevation = 90.0;
  if (elevation < -90.0) elevation = -90.0;
  return {range, azimuth, elevation};
}

Vec3 body_spherical_offset(const Orientation& own_orient, const BodySpherical& sph) {
  const double elev = deg2rad(sph.elevation + own_orient.pitch);
  const double bearing = deg2rad(sph.azimuth + own_orient.heading);
  const double horiz = sph.range * std::cos(elev);
  return {horiz * std::sin(bearing), horiz * std::cos(bearing), sph.range * std::sin(elev)};
}

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 11> kEventNames{{
    {EventKind::SensorInputReceived, "SensorInputReceived"},
    {EventKind::SensorAlert, "SensorAlert"},
    {EventKind::TrafficDetected, "TrafficDetected"},
    {EventKind::CollisionEvaluated, "CollisionEvaluated"},
    {EventKind::ThreatIdentified, "ThreatIdentified"},
    {EventKind::ManeuverDetermined, "ManeuverDetermined"},
    {EventKind::CommandIssued, "CommandIssued"},
    {EventKind::ManeuverTerminated, "ManeuverTerminated"},
    {EventKind::SelfTestResult, "SelfTestResult"},
    {EventKind::FailoverActivated, "FailoverActivated"},
    {EventKind::GroundLinkSent, "GroundLinkSent"},
}};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kEventNames)
    if (k == kind) return name;
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (const auto& [k, n] : kEventNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string fmt_int(long long v) { return fmt::format("{}", v); }

std::string fmt_real(double v) {
  std::string s = fmt::format("{:.3f}", v);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string fmt_time(double t) { return fmt_real(t); }

RequirementId::RequirementId(std::string tag) : tag_(std::move(tag)) {
  if (!is_valid(tag_)) throw std::invalid_argument("malformed requirement id: " + tag_);
}

bool RequirementId::is_valid(std::string_view tag) {
  static const std::regex re("(SRATS|HLR|DHLR|LLR)_[0-9a-zA-Z-]+");
  return std::regex_match(tag.begin(), tag.end(), re);
}

std::string_view RequirementId::level() const {
  const auto pos = tag_.find('_');
  return std::string_view(tag_).substr(0, pos);
}

}  // namespace cas
