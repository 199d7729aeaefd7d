#include "cas/assessment.hpp"

#include <algorithm>
#include <tuple>

namespace cas {

CpaResult cpa(Vec3 rel_pos, Vec3 rel_vel, double eps_v) {
  if (rel_pos.x == 0.0 && rel_pos.y == 0.0 && rel_pos.z == 0.0) throw ZeroRelativePosition();
  const double v2 = rel_vel.dot(rel_vel);
  if (std::sqrt(v2) < eps_v) return {0.0, rel_pos.norm(), false};
  const double t_star = -rel_pos.dot(rel_vel) / v2;
  CpaResult r;
  r.t_cpa = std::max(t_star, 0.0);
  r.miss_distance = (rel_pos + r.t_cpa * rel_vel).norm();
  r.closing = t_star > 0.0;
  return r;
}

std::string_view to_string(ThreatLevel l) {
  switch (l) {
    case ThreatLevel::None: return "None";
    case ThreatLevel::Low: return "Low";
    case ThreatLevel::High: return "High";
  }
  return "None";
}

namespace {

ThreatAssessment assess(const Position& own_pos, const Velocity& own_vel, const Track& track,
                        const AssessmentParams& p) {
  ThreatAssessment a;
  a.track_id = track.track_id;
  const Vec3 rel_pos = track.position - own_pos;
  const Vec3 rel_vel = track.velocity.vec() - own_vel.vec();
  CpaResult c;
  try {
    c = cpa(rel_pos, rel_vel, p.eps_v);
  } catch (const ZeroRelativePosition&) {
    // Co-located: collision is now.
    c = {0.0, 0.0, true};
  }
  a.miss_distance = c.miss_distance;
  a.is_collision_threat =
      c.closing && c.miss_distance <= p.protected_radius && c.t_cpa <= p.horizon;
  if (a.is_collision_threat) {
    a.time_to_collision = c.t_cpa;
    a.threat_level = c.t_cpa <= p.t_high ? ThreatLevel::High : ThreatLevel::Low;
  }
  return a;
}

void emit_evaluated(TraceBus* bus, double t, const Track& tr, const ThreatAssessment& a) {
  emit_to(bus, t, EventKind::CollisionEvaluated,
          {{"level", std::string(to_string(a.threat_level))},
           {"measure_id", tr.last_measure_id},
           {"miss", fmt_real(a.miss_distance)},
           {"track_id", fmt_int(a.track_id)}});
}

void emit_threat(TraceBus* bus, double t, const ThreatAssessment& a) {
  emit_to(bus, t, EventKind::ThreatIdentified,
          {{"level", std::string(to_string(a.threat_level))},
           {"track_id", fmt_int(a.track_id)},
           {"ttc", fmt_real(a.time_to_collision)}});
}

}  // namespace

ThreatAssessment evaluate(const Position& own_pos, const Velocity& own_vel, const Track& track,
                          const AssessmentParams& params, double t, TraceBus* bus) {
  if (!track.confirmed())
    throw TrackNotConfirmed("track " + std::to_string(track.track_id) + " is not confirmed");
  const ThreatAssessment a = assess(own_pos, own_vel, track, params);
  emit_evaluated(bus, t, track, a);
  if (a.is_collision_threat) emit_threat(bus, t, a);
  return a;
}

std::vector<ThreatAssessment> evaluate_all(const Position& own_pos, const Velocity& own_vel,
                                           const TrackSet& tracks, const AssessmentParams& params,
                                           double t, TraceBus* bus) {
  std::vector<const Track*> confirmed;
  for (const auto& tr : tracks.tracks)
    if (tr.confirmed()) confirmed.push_back(&tr);
  std::sort(confirmed.begin(), confirmed.end(),
            [](const Track* a, const Track* b) { return a->track_id < b->track_id; });

  std::vector<ThreatAssessment> out(confirmed.size());
  const long n = static_cast<long>(confirmed.size());
  // Per-track evaluation is independent; events are emitted afterwards in
  // track_id order so the trace does not depend on scheduling.
#pragma omp parallel for schedule(static) if (n > 256)
  for (long i = 0; i < n; ++i) out[i] = assess(own_pos, own_vel, *confirmed[i], params);

  for (long i = 0; i < n; ++i) emit_evaluated(bus, t, *confirmed[i], out[i]);
  for (const auto& a : prioritize(out)) emit_threat(bus, t, a);
  return out;
}

bool higher_priority(const ThreatAssessment& a, const ThreatAssessment& b) {
  if (a.time_to_collision != b.time_to_collision) return a.time_to_collision < b.time_to_collision;
  if (a.threat_level != b.threat_level) return a.threat_level > b.threat_level;
  return a.track_id < b.track_id;
}

std::vector<ThreatAssessment> prioritize(std::span<const ThreatAssessment> assessments) {
  std::vector<ThreatAssessment> out;
  for (const auto& a : assessments)
    if (a.is_collision_threat) out.push_back(a);
  std::stable_sort(out.begin(), out.end(), higher_priority);
  return out;
}

}  // namespace cas
