#include "cas/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "cas/assessment.hpp"
#include "cas/health.hpp"
#include "cas/maneuver.hpp"

namespace cas {

namespace {

bool is_phantom(const std::string& id) { return id.rfind("PH", 0) == 0; }

// Uniform in [lo, hi) from the top 53 bits; identical on every platform.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

struct Kinematics {
  Position position;
  double heading = 0.0;  // deg
  double ground_speed = 0.0;
  double cruise_vz = 0.0;
  double vz = 0.0;

  static Kinematics from(const OwnSpec& own) {
    Kinematics k;
    k.position = own.position;
    k.ground_speed = std::hypot(own.velocity.vx, own.velocity.vy);
    k.heading = k.ground_speed > 0.0 ? wrap_heading_deg(rad2deg(std::atan2(own.velocity.vx, own.velocity.vy))) : 0.0;
    k.cruise_vz = k.vz = own.velocity.vz;
    return k;
  }
  Velocity velocity() const {
    const double h = deg2rad(heading);
    return {ground_speed * std::sin(h), ground_speed * std::cos(h), vz};
  }
  // Velocity the own ship would hold if it stopped maneuvering now.
  Velocity projected_velocity() const {
    Velocity v = velocity();
    v.vz = cruise_vz;
    return v;
  }
  Orientation orientation() const {
    return {heading, rad2deg(std::atan2(vz, ground_speed))};
  }
};

const FaultInjection* active_fault(const Scenario& sc, FaultKind kind, double t) {
  for (const auto& f : sc.faults)
    if (f.kind == kind && f.active(t)) return &f;
  return nullptr;
}

bool stage_disabled(const Scenario& sc, const std::string& stage, double t) {
  for (const auto& f : sc.faults)
    if (f.kind == FaultKind::StageDisable && f.active(t) && f.param("stage") == stage) return true;
  return false;
}

bool obstructed(const Scenario& sc, const std::string& id, double t) {
  for (const auto& f : sc.faults) {
    if (f.kind != FaultKind::PhysicalObstruction || !f.active(t)) continue;
    const std::string who = f.param("intruder", "all");
    if (who == "all" || who == id) return true;
  }
  return false;
}

bool source_failed(const Scenario& sc, SensorSource src, double t) {
  for (const auto& f : sc.faults) {
    if (f.kind != FaultKind::SensorFailure || !f.active(t)) continue;
    const std::string which = f.param("sensor", "both");
    if (which == "both" || (which == "primary" && src == SensorSource::Primary) ||
        (which == "secondary" && src == SensorSource::Secondary))
      return true;
  }
  return false;
}

class PhantomSource {
 public:
  explicit PhantomSource(const Scenario& sc) {
    for (const auto& f : sc.faults)
      if (f.kind == FaultKind::PhantomDetection)
        rngs_.emplace_back(&f, std::mt19937_64(static_cast<std::uint64_t>(f.param_real("seed", 1.0))));
  }

  void inject(const Scenario& sc, long long tick, const Kinematics& own, SensorInput& frame) {
    const double t = sc.tick_time(tick);
    for (auto& [f, rng] : rngs_) {
      if (!f->active(t)) continue;
      const auto period = static_cast<long long>(f->param_real("period", 5.0));
      const long long first = static_cast<long long>(std::ceil(f->t_start / sc.dt - 1e-9));
      if ((tick - first) % period != 0) continue;
      const double range_cap = std::min({2500.0, 0.9 * sc.region.horizontal_radius, 0.9 * frame.detection_range});
      const double lo = f->param_real("min_range", 300.0);
      const double hi = std::max(lo, f->param_real("max_range", range_cap));
      const double d = uniform(rng, lo, hi);
      const double az = uniform(rng, -0.9, 0.9) * frame.azimuth_for;
      const double dz_cap = std::min(0.9 * sc.region.vertical_half_height,
                                     d * std::tan(deg2rad(0.9 * frame.elevation_for)));
      const double dz = uniform(rng, -1.0, 1.0) * dz_cap;
      const double bearing = deg2rad(own.heading + az);
      frame.measures.push_back({{d * std::sin(bearing), d * std::cos(bearing), dz},
                                fmt::format("PH{}", ++count_)});
    }
  }

 private:
  std::vector<std::pair<const FaultInjection*, std::mt19937_64>> rngs_;
  long long count_ = 0;
};

SensorInput build_frame(const Scenario& sc, double t, const Kinematics& own, SensorSource src) {
  SensorInput in;
  in.t = t;
  in.source_id = src;
  in.sensor_status = !source_failed(sc, src, t);
  in.detection_range = sc.sensor.detection_range;
  in.azimuth_for = sc.sensor.azimuth_for;
  in.elevation_for = sc.sensor.elevation_for;
  if (const auto* f = active_fault(sc, FaultKind::ConfigError, t)) {
    in.detection_range = f->param_real("detection_range", in.detection_range);
    in.azimuth_for = f->param_real("azimuth_for", in.azimuth_for);
    in.elevation_for = f->param_real("elevation_for", in.elevation_for);
  }
  in.orientation = own.orientation();
  in.position = own.position;
  if (!in.sensor_status) return in;
  for (const auto& intruder : sc.intruders) {
    if (obstructed(sc, intruder.id, t)) continue;
    const Vec3 offset = intruder.position_at(t) - own.position;
    if (offset == Vec3{}) continue;
    in.measures.push_back({offset, intruder.id});
  }
  return in;
}

void corrupt(SensorInput& frame) {
  if (frame.measures.empty())
    frame.measures.push_back({{std::nan(""), 0.0, 0.0}, "CORRUPT"});
  else
    frame.measures.push_back(frame.measures.front());
}

std::string csv_header(const Scenario& sc) {
  std::string h = "t,own_x,own_y,own_z";
  for (const auto& in : sc.intruders) h += ",d_" + in.id;
  return h + ",maneuver\n";
}

}  // namespace

RunResult run(const Scenario& sc, const PipelineConfig& cfg) {
  RunResult res;
  TraceBus bus;
  MemorySink ground;

  SelfTestRegistry registry;
  registry.cooperative = sc.sensor.cooperative;
  registry.tracking = cfg.tracking;
  registry.assessment = cfg.assessment;
  registry.maneuver = cfg.maneuver;
  registry.frame_period = sc.dt;
  registry.period = cfg.self_test_period;

  Kinematics own = Kinematics::from(sc.own);
  TrackSet tracks;
  ActiveManeuverState maneuver;
  SourceSelection selection;
  IntegrityContext integrity;
  integrity.speed_bound = cfg.speed_bound;
  PhantomSource phantoms(sc);
  std::set<int> phantom_confirmed;

  double min_sep = std::numeric_limits<double>::infinity();
  auto sample_separation = [&](double t) {
    for (const auto& in : sc.intruders) min_sep = std::min(min_sep, (in.position_at(t) - own.position).norm());
  };
  sample_separation(0.0);
  res.csv = csv_header(sc);

  const long long ticks = sc.tick_count();
  for (long long k = 0; k < ticks; ++k) {
    const double t = sc.tick_time(k);
    const std::size_t first_event = bus.size();
    res.own.push_back({t, own.position, own.orientation(), own.velocity()});

    // --- health: configuration-dependent self-test inputs
    const FaultInjection* cfg_fault = active_fault(sc, FaultKind::ConfigError, t);
    registry.cooperative = sc.sensor.cooperative;
    if (cfg_fault) registry.cooperative.range = cfg_fault->param_real("coop_range", registry.cooperative.range);
    const FaultInjection* sw_fault = active_fault(sc, FaultKind::SoftwareErrorDrop, t);
    registry.cpa_fixture_bias = sw_fault ? sw_fault->param_real("cpa_fixture_bias", 0.0) : 0.0;
    if (k == 0) startup_self_test(registry, t, &bus);

    // --- sensor frames
    bool withheld = false;
    for (const auto& f : sc.faults)
      if (f.kind == FaultKind::CommDelay && f.active(t) && f.param("channel", "sensor") == "sensor") withheld = true;

    std::optional<SensorInput> frame;
    if (!withheld) {
      SensorInput primary = build_frame(sc, t, own, SensorSource::Primary);
      SensorInput secondary = build_frame(sc, t, own, SensorSource::Secondary);
      const SourceDecision decision = select_source(primary.sensor_status, secondary.sensor_status, selection);
      registry.health[Component::PrimarySensor] = {Component::PrimarySensor,
                                                   primary.sensor_status ? HealthStatus::Ok : HealthStatus::Failed, t};
      registry.health[Component::SecondarySensor] = {
          Component::SecondarySensor, secondary.sensor_status ? HealthStatus::Ok : HealthStatus::Failed, t};
      SensorInput& chosen = decision.selection.active == SensorSource::Primary ? primary : secondary;
      if (!decision.failed) {
        phantoms.inject(sc, k, own, chosen);
        if (sw_fault) corrupt(chosen);
      }
      bus.emit(t, EventKind::SensorInputReceived,
               {{"measures", fmt_int(static_cast<long long>(chosen.measures.size()))},
                {"source", std::string(to_string(decision.selection.active))}});
      for (const SensorInput* f : {&primary, &secondary}) handle_sensor_status(*f, &bus);
      if (decision.switched)
        bus.emit(t, EventKind::FailoverActivated,
                 {{"count", fmt_int(decision.selection.failover_count)},
                  {"from", std::string(to_string(selection.active))},
                  {"to", std::string(to_string(decision.selection.active))}});
      selection = decision.selection;
      registry.frame_times.push_back(t);
      if (!decision.failed) frame = std::move(chosen);
    }

    std::optional<ValidatedInput> validated;
    if (frame) {
      const IntegrityVerdict iv = integrity_check(*frame, integrity);
      if (!iv.pass) {
        bus.emit(t, EventKind::SensorAlert,
                 {{"detail", std::string(to_string(iv.findings.front().kind))},
                  {"reason", "Integrity"},
                  {"source", std::string(to_string(frame->source_id))}});
      } else {
        integrity.previous_t = frame->t;
        integrity.previous_position = frame->position;
        try {
          validated = validate_sensor_input(*frame);
        } catch (const SensorInputError& e) {
          bus.emit(t, EventKind::SensorAlert,
                   {{"reason", std::string(to_string(e.kind()))},
                    {"source", std::string(to_string(frame->source_id))},
                    {"value", fmt_real(e.value())}});
        }
      }
    }
    periodic_self_test(registry, t, &bus);

    // --- detection and tracking
    std::optional<DetectionOutput> detections;
    if (validated && !stage_disabled(sc, "detection", t)) detections = detect(*validated, sc.region, &bus);
    if (stage_disabled(sc, "tracking", t)) {
      tracks.tracks.clear();
    } else {
      if (detections) tracks = associate_and_update(tracks, *detections, t, cfg.tracking);
      tracks = coast_and_drop(tracks, t, cfg.tracking);
    }
    for (const auto& tr : tracks.tracks)
      if (tr.confirmed() && is_phantom(tr.last_measure_id)) phantom_confirmed.insert(tr.track_id);

    // --- assessment and maneuver
    std::vector<ThreatAssessment> assessments;
    if (!stage_disabled(sc, "assessment", t))
      assessments = evaluate_all(own.position, own.projected_velocity(), tracks, cfg.assessment, t, &bus);
    const std::vector<ThreatAssessment> prioritized = prioritize(assessments);

    if (stage_disabled(sc, "maneuver", t)) {
      maneuver.active.reset();
    } else {
      const OwnState own_state{own.position, own.orientation(), own.velocity()};
      const ManeuverPlan plan = determine(prioritized, own_state, tracks, t, &bus);
      const StepResult step = step_command(maneuver, plan, assessments, t, cfg.maneuver, &bus);
      maneuver = step.state;
      for (const auto& c : step.commands) {
        if (c.kind == CommandKind::Terminate) continue;
        const Track* tr = tracks.find(c.maneuver.threat_track_id);
        if (tr && is_phantom(tr->last_measure_id)) ++res.phantom_commands;
      }
    }

    // --- ground link
    std::vector<TraceEvent> reportable;
    for (std::size_t i = first_event; i < bus.size(); ++i)
      if (is_ground_reportable(bus.events()[i].kind)) reportable.push_back(bus.events()[i]);
    bool link_down = false;
    for (const auto& f : sc.faults)
      if (f.kind == FaultKind::CommDelay && f.active(t) && f.param("channel", "sensor") == "ground") link_down = true;
    ground.set_available(!link_down);
    if (!reportable.empty()) {
      long long sent = 0, dropped = 0;
      for (const auto& ev : reportable) {
        try {
          res.gclog.push_back(emit_ground_event(ev, ground));
          ++sent;
        } catch (const SinkUnavailable&) {
          ++dropped;
        }
      }
      bus.emit(t, EventKind::GroundLinkSent, {{"dropped", fmt_int(dropped)}, {"records", fmt_int(sent)}});
    }
    registry.health[Component::GroundLink] = {Component::GroundLink,
                                              link_down ? HealthStatus::Degraded : HealthStatus::Ok, t};

    // --- per-tick records
    TickSnapshot snap{t, {}, std::nullopt};
    for (const auto& a : prioritized) snap.threats.push_back(a);
    if (maneuver.active) snap.active_track = maneuver.active->threat_track_id;
    res.snapshots.push_back(std::move(snap));

    std::string row = fmt::format("{:.3f},{:.3f},{:.3f},{:.3f}", t, own.position.x, own.position.y, own.position.z);
    for (const auto& in : sc.intruders) row += fmt::format(",{:.3f}", (in.position_at(t) - own.position).norm());
    row += "," + (maneuver.active ? std::string(to_string(maneuver.active->kind)) : std::string("none")) + "\n";
    res.csv += row;

    // --- fly to the next tick
    if (k + 1 == ticks) break;
    double turn = 0.0;
    own.vz = own.cruise_vz;
    if (maneuver.active) {
      turn = turn_of(maneuver.active->kind) == TurnDirection::Right ? cfg.turn_rate : -cfg.turn_rate;
      switch (vertical_of(maneuver.active->kind)) {
        case VerticalSense::Climb: own.vz = own.cruise_vz + cfg.vertical_rate; break;
        case VerticalSense::Descend: own.vz = own.cruise_vz - cfg.vertical_rate; break;
        case VerticalSense::Level: break;
      }
    }
    const double h = sc.dt / cfg.substeps;
    for (int s = 1; s <= cfg.substeps; ++s) {
      const double mid = deg2rad(own.heading + 0.5 * turn * h);
      own.position = own.position + Vec3{h * own.ground_speed * std::sin(mid),
                                         h * own.ground_speed * std::cos(mid), h * own.vz};
      own.heading = wrap_heading_deg(own.heading + turn * h);
      sample_separation(t + s * h);
    }
  }

  res.trace = bus.take();
  res.min_separation = min_sep;
  res.final_tracks = std::move(tracks);
  res.phantom_tracks_confirmed = static_cast<int>(phantom_confirmed.size());
  return res;
}

std::set<std::string> oracle_detect(const SensorInput& frame, const RegionParams& region) {
  std::set<std::string> out;
  const double range = frame.detection_range;
  const double az_half = std::fabs(frame.azimuth_for);
  const double el_half = std::fabs(frame.elevation_for);
  for (const auto& m : frame.measures) {
    const double tx = frame.position.x + m.relative_offset.x;
    const double ty = frame.position.y + m.relative_offset.y;
    const double tz = frame.position.z + m.relative_offset.z;
    const double dx = tx - frame.position.x, dy = ty - frame.position.y, dz = tz - frame.position.z;
    if (dx == 0.0 && dy == 0.0 && dz == 0.0) continue;
    const double horiz = std::sqrt(dx * dx + dy * dy);
    if (horiz > region.horizontal_radius || std::fabs(dz) > region.vertical_half_height) continue;
    if (std::sqrt(dx * dx + dy * dy + dz * dz) > range) continue;
    double rel = std::atan2(dx, dy) * 180.0 / kPi - frame.orientation.heading;
    while (rel > 180.0) rel -= 360.0;
    while (rel <= -180.0) rel += 360.0;
    if (std::fabs(rel) > az_half) continue;
    const double el = std::atan2(dz, horiz) * 180.0 / kPi - frame.orientation.pitch;
    if (std::fabs(el) > el_half) continue;
    out.insert(m.measure_id);
  }
  return out;
}

std::set<std::string> oracle_detect(const Scenario& sc, const OwnTruth& own) {
  SensorInput frame;
  frame.t = own.t;
  frame.position = own.position;
  frame.orientation = own.orientation;
  frame.detection_range = sc.sensor.detection_range;
  frame.azimuth_for = sc.sensor.azimuth_for;
  frame.elevation_for = sc.sensor.elevation_for;
  for (const auto& in : sc.intruders) frame.measures.push_back({in.position_at(own.t) - own.position, in.id});
  return oracle_detect(frame, sc.region);
}

double oracle_min_separation(const Scenario& sc, const PipelineConfig& cfg) {
  return run(sc, cfg).min_separation;
}

std::string trace_text(const RunResult& r) {
  std::string s;
  for (const auto& ev : r.trace) s += serialize_record(ev) + "\n";
  return s;
}

std::string gclog_text(const RunResult& r) {
  std::string s;
  for (const auto& line : r.gclog) s += line + "\n";
  return s;
}

}  // namespace cas
