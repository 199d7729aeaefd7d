#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cas {

/// Plain 3-vector used for offsets and relative states (meters or m/s).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return s * a; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  double horizontal_norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

// World frame is flat East-North-Up; x east, y north, z up.
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 vec() const { return {x, y, z}; }
  static Position from(Vec3 v) { return {v.x, v.y, v.z}; }
  bool finite() const { return vec().finite(); }
  friend bool operator==(const Position&, const Position&) = default;
};

inline Vec3 operator-(const Position& a, const Position& b) { return a.vec() - b.vec(); }
inline Position operator+(const Position& p, Vec3 d) { return Position::from(p.vec() + d); }

struct Velocity {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;

  Vec3 vec() const { return {vx, vy, vz}; }
  static Velocity from(Vec3 v) { return {v.x, v.y, v.z}; }
  double speed() const { return vec().norm(); }
  bool finite() const { return vec().finite(); }
  friend bool operator==(const Velocity&, const Velocity&) = default;
};

inline constexpr double kDefaultSpeedSanityBound = 350.0;  // m/s

/// heading: compass degrees in [0, 360), 0 = north, clockwise positive.
/// pitch: degrees in [-90, 90], nose up positive.
struct Orientation {
  double heading = 0.0;
  double pitch = 0.0;

  bool valid() const {
    return std::isfinite(heading) && std::isfinite(pitch) && heading >= 0.0 && heading < 360.0 &&
           pitch >= -90.0 && pitch <= 90.0;
  }
  friend bool operator==(const Orientation&, const Orientation&) = default;
};

/// Target line of sight in the body frame. Azimuth is measured from the
/// flight path, positive clockwise seen from above; elevation positive up.
struct BodySpherical {
  double range = 0.0;
  double azimuth = 0.0;    // (-180, 180]
  double elevation = 0.0;  // [-90, 90]
};

class ZeroRangeError : public std::domain_error {
 public:
  ZeroRangeError() : std::domain_error("target coincides with own position") {}
};

BodySpherical to_body_spherical(const Position& own_pos, const Orientation& own_orient,
                                const Position& target);

/// Inverse of to_body_spherical: world-frame offset from own position.
Vec3 body_spherical_offset(const Orientation& own_orient, const BodySpherical& sph);

inline constexpr double kMetersPerNauticalMile = 1852.0;

constexpr double nm_to_meters(double nautical_miles) {
  return nautical_miles * kMetersPerNauticalMile;
}

/// Maps any angle in degrees onto (-180, 180].
double normalize_angle_deg(double deg);
/// Maps any angle in degrees onto [0, 360).
double wrap_heading_deg(double deg);

inline constexpr double kPi = 3.14159265358979323846;
constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

// ---------------------------------------------------------------------------
// Trace events

enum class EventKind {
  SensorInputReceived,
  SensorAlert,
  TrafficDetected,
  CollisionEvaluated,
  ThreatIdentified,
  ManeuverDetermined,
  CommandIssued,
  ManeuverTerminated,
  SelfTestResult,
  FailoverActivated,
  GroundLinkSent,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

using Payload = std::map<std::string, std::string>;

struct TraceEvent {
  double t = 0.0;
  EventKind kind = EventKind::SensorInputReceived;
  Payload payload;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Payload value formatting: integers bare, reals with exactly three decimals.
std::string fmt_int(long long v);
std::string fmt_real(double v);
std::string fmt_time(double t);

// ---------------------------------------------------------------------------

/// Traceability key, e.g. "LLR_08a-01". Pattern: (SRATS|HLR|DHLR|LLR)_[0-9a-zA-Z-]+
class RequirementId {
 public:
  explicit RequirementId(std::string tag);
  static bool is_valid(std::string_view tag);

  const std::string& str() const { return tag_; }
  std::string_view level() const;  // "SRATS", "HLR", "DHLR" or "LLR"

  friend auto operator<=>(const RequirementId&, const RequirementId&) = default;

 private:
  std::string tag_;
};

}  // namespace cas
