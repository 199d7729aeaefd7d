#include "cas/health.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <fmt/format.h>

namespace cas {

std::string_view to_string(Component c) {
  switch (c) {
    case Component::PrimarySensor: return "PrimarySensor";
    case Component::SecondarySensor: return "SecondarySensor";
    case Component::Detection: return "Detection";
    case Component::Tracking: return "Tracking";
    case Component::Assessment: return "Assessment";
    case Component::Maneuver: return "Maneuver";
    case Component::GroundLink: return "GroundLink";
  }
  return "Unknown";
}

std::string_view to_string(HealthStatus s) {
  switch (s) {
    case HealthStatus::Ok: return "Ok";
    case HealthStatus::Degraded: return "Degraded";
    case HealthStatus::Failed: return "Failed";
  }
  return "Unknown";
}

std::string_view to_string(IntegrityViolation v) {
  switch (v) {
    case IntegrityViolation::NonFiniteField: return "NonFiniteField";
    case IntegrityViolation::OutOfOrderTimestamp: return "OutOfOrderTimestamp";
    case IntegrityViolation::OwnSpeedExceeded: return "OwnSpeedExceeded";
    case IntegrityViolation::DuplicateMeasure: return "DuplicateMeasure";
    case IntegrityViolation::ZeroOffset: return "ZeroOffset";
  }
  return "Unknown";
}

bool IntegrityVerdict::has(IntegrityViolation v) const {
  return std::any_of(findings.begin(), findings.end(),
                     [v](const IntegrityFinding& f) { return f.kind == v; });
}

IntegrityVerdict integrity_check(const SensorInput& in, const IntegrityContext& ctx) {
  IntegrityVerdict v;
  auto fail = [&](IntegrityViolation k, std::string detail) {
    v.findings.push_back({k, std::move(detail)});
  };

  const std::pair<const char*, double> scalars[] = {
      {"t", in.t},
      {"detection_range", in.detection_range},
      {"azimuth_for", in.azimuth_for},
      {"elevation_for", in.elevation_for},
      {"orientation.heading", in.orientation.heading},
      {"orientation.pitch", in.orientation.pitch},
      {"position.x", in.position.x},
      {"position.y", in.position.y},
      {"position.z", in.position.z},
  };
  for (const auto& [name, value] : scalars)
    if (!std::isfinite(value)) fail(IntegrityViolation::NonFiniteField, name);

  std::set<std::string> ids;
  for (const auto& m : in.measures) {
    if (!m.relative_offset.finite())
      fail(IntegrityViolation::NonFiniteField, "measure " + m.measure_id);
    else if (m.relative_offset == Vec3{})
      fail(IntegrityViolation::ZeroOffset, "measure " + m.measure_id);
    if (!ids.insert(m.measure_id).second)
      fail(IntegrityViolation::DuplicateMeasure, "measure_id " + m.measure_id);
  }

  if (ctx.previous_t && std::isfinite(in.t)) {
    if (!(in.t > *ctx.previous_t)) {
      fail(IntegrityViolation::OutOfOrderTimestamp,
           fmt::format("t={} after t={}", in.t, *ctx.previous_t));
    } else if (ctx.previous_position && in.position.finite()) {
      const double speed = (in.position - *ctx.previous_position).norm() / (in.t - *ctx.previous_t);
      if (speed > ctx.speed_bound)
        fail(IntegrityViolation::OwnSpeedExceeded, fmt::format("{:.3f} m/s", speed));
    }
  }
  v.pass = v.findings.empty();
  return v;
}

// ---------------------------------------------------------------------------

bool SelfTestReport::names(std::string_view what) const {
  return std::find(failures.begin(), failures.end(), what) != failures.end();
}

namespace {

bool detection_check(const SelfTestRegistry& r) {
  return validate_cooperative_config(r.cooperative).all_pass();
}

bool tracking_check(const SelfTestRegistry& r) {
  return r.tracking.valid() && r.frame_period > 0.0 &&
         1.0 / r.frame_period >= r.tracking.update_rate_min;
}

bool assessment_check(const SelfTestRegistry& r) {
  const AssessmentParams& p = r.assessment;
  if (!(p.protected_radius > 0.0 && p.horizon > 0.0 && p.t_high >= 0.0 && p.t_high <= p.horizon))
    return false;
  // Head-on fixture with known answer: CPA in 10 s at zero miss distance.
  const CpaResult c = cpa({1000.0 + r.cpa_fixture_bias, 0.0, 0.0}, {-100.0, 0.0, 0.0});
  return c.closing && std::abs(c.t_cpa - 10.0) < 1e-9 && c.miss_distance < 1e-9;
}

bool maneuver_check(const SelfTestRegistry& r) {
  // Drive the command state machine through each declared transition.
  const ThreatAssessment a{1, ThreatLevel::Low, 20.0, true, 0.0};
  const ThreatAssessment b{2, ThreatLevel::High, 5.0, true, 0.0};
  Maneuver ma{0, ManeuverKind::LevelRight, 1, false, 20.0, 0.0};
  Maneuver mb{0, ManeuverKind::LevelLeft, 2, false, 5.0, 0.0};
  const ManeuverPlan none{};
  const ManeuverPlan only_a{{ma}, ma};
  const ManeuverPlan b_first{{mb, ma}, mb};
  const std::vector<ThreatAssessment> no_threats{};
  const std::vector<ThreatAssessment> threats_a{a};
  const std::vector<ThreatAssessment> threats_ab{b, a};
  try {
    const ActiveManeuverState idle{};
    if (classify(step_command(idle, none, no_threats, 0.0, r.maneuver).commands) != Transition::Idle)
      return false;
    const StepResult init = step_command(idle, only_a, threats_a, 0.0, r.maneuver);
    if (classify(init.commands) != Transition::Initiate) return false;
    if (classify(step_command(init.state, only_a, threats_a, 0.1, r.maneuver).commands) !=
        Transition::Continue)
      return false;
    if (classify(step_command(init.state, b_first, threats_ab, 0.1, r.maneuver).commands) !=
        Transition::Override)
      return false;
    if (classify(step_command(init.state, none, no_threats, 0.1, r.maneuver).commands) !=
        Transition::Terminate)
      return false;
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

SelfTestReport run_checks(SelfTestRegistry& r, double t) {
  SelfTestReport rep;
  rep.t = t;
  auto record = [&](Component c, bool ok) {
    ComponentHealth h{c, ok ? HealthStatus::Ok : HealthStatus::Failed, t};
    r.health[c] = h;
    rep.components.push_back(h);
    if (!ok) rep.failures.emplace_back(to_string(c));
  };
  // Sensors and ground link report the status the pipeline last observed.
  for (Component c : {Component::PrimarySensor, Component::SecondarySensor, Component::GroundLink}) {
    auto it = r.health.find(c);
    ComponentHealth h = it != r.health.end() ? it->second : ComponentHealth{c, HealthStatus::Ok, t};
    h.last_checked = t;
    r.health[c] = h;
    rep.components.push_back(h);
    if (h.status != HealthStatus::Ok) rep.failures.emplace_back(to_string(c));
  }
  record(Component::Detection, detection_check(r));
  record(Component::Tracking, tracking_check(r));
  record(Component::Assessment, assessment_check(r));
  record(Component::Maneuver, maneuver_check(r));
  return rep;
}

void emit_report(TraceBus* bus, const SelfTestReport& rep, std::string_view phase) {
  std::string failed;
  for (const auto& f : rep.failures) failed += (failed.empty() ? "" : ",") + f;
  emit_to(bus, rep.t, EventKind::SelfTestResult,
          {{"failed", failed.empty() ? "none" : failed},
           {"pass", rep.pass ? "1" : "0"},
           {"phase", std::string(phase)}});
}

}  // namespace

SelfTestReport startup_self_test(SelfTestRegistry& registry, double t, TraceBus* bus) {
  SelfTestReport rep = run_checks(registry, t);
  rep.pass = rep.failures.empty();
  registry.last_periodic = t;
  emit_report(bus, rep, "startup");
  return rep;
}

std::optional<SelfTestReport> periodic_self_test(SelfTestRegistry& registry, double t,
                                                 TraceBus* bus) {
  constexpr double kEps = 1e-9;
  if (!(t >= 0.0)) throw std::invalid_argument("periodic_self_test: t must be >= 0");
  const auto slot = [&](double x) { return std::floor(x / registry.period + kEps); };
  if (!(slot(t) > slot(registry.last_periodic))) return std::nullopt;

  SelfTestReport rep = run_checks(registry, t);

  // Cadence over the closing window, bracketed by the window edges so that
  // silence at either end counts as a gap.
  const double start = std::max(0.0, t - registry.period);
  std::vector<double> stamps{start};
  for (double ft : registry.frame_times)
    if (ft > start + kEps && ft < t - kEps) stamps.push_back(ft);
  if (t > start + kEps) stamps.push_back(t);
  if (!check_cadence(stamps).pass) rep.failures.emplace_back("Cadence");
  std::erase_if(registry.frame_times, [&](double ft) { return ft < start - kEps; });

  rep.pass = rep.failures.empty();
  registry.last_periodic = t;
  emit_report(bus, rep, "periodic");
  return rep;
}

// ---------------------------------------------------------------------------

SourceDecision select_source(bool primary_ok, bool secondary_ok, const SourceSelection& current) {
  SourceDecision d;
  d.selection = current;
  const bool current_ok = current.active == SensorSource::Primary ? primary_ok : secondary_ok;
  const bool other_ok = current.active == SensorSource::Primary ? secondary_ok : primary_ok;
  if (current_ok) return d;
  if (other_ok) {
    d.selection.active = current.active == SensorSource::Primary ? SensorSource::Secondary
                                                                 : SensorSource::Primary;
    ++d.selection.failover_count;
    d.switched = true;
    return d;
  }
  d.failed = true;
  return d;
}

// ---------------------------------------------------------------------------

void StreamSink::append(const std::string& line) {
  if (!available_ || !*out_) throw SinkUnavailable("ground link stream unavailable");
  *out_ << line << '\n';
}

void MemorySink::append(const std::string& line) {
  if (!available_) throw SinkUnavailable("ground link unavailable");
  lines_.push_back(line);
}

std::string emit_ground_event(const TraceEvent& ev, GroundLinkSink& sink) {
  std::string line = serialize_record(ev);
  sink.append(line);
  return line;
}

bool is_ground_reportable(EventKind kind) {
  switch (kind) {
    case EventKind::SensorAlert:
    case EventKind::ThreatIdentified:
    case EventKind::CommandIssued:
    case EventKind::ManeuverTerminated:
    case EventKind::SelfTestResult:
    case EventKind::FailoverActivated: return true;
    default: return false;
  }
}

}  // namespace cas
