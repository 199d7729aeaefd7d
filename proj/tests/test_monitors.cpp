#include <doctest.h>

#include <sstream>

#include "cas/event_log.hpp"
#include "cas/monitors.hpp"

using namespace cas;

namespace {

std::vector<TraceEvent> parse(const std::string& text) {
  std::istringstream in(text);
  return read_records(in);
}

// Ticks every 0.1 s; the SensorInputReceived records pin the tick period.
std::string frames(int n) {
  std::string s;
  for (int k = 0; k < n; ++k)
    s += fmt_time(k * 0.1) + "|SensorInputReceived|measures=1;source=Primary\n";
  return s;
}

std::vector<TraceEvent> merged(int ticks, const std::vector<TraceEvent>& extra) {
  auto tr = parse(frames(ticks));
  tr.insert(tr.end(), extra.begin(), extra.end());
  std::stable_sort(tr.begin(), tr.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return tr;
}

TraceEvent detected(double t, const std::string& m) {
  return {t, EventKind::TrafficDetected, {{"measure_id", m}, {"x", "0.000"}, {"y", "0.000"}, {"z", "0.000"}}};
}
TraceEvent evaluated(double t, int track, const std::string& m) {
  return {t, EventKind::CollisionEvaluated, {{"measure_id", m}, {"track_id", std::to_string(track)}}};
}
TraceEvent threat(double t, int track, const std::string& level = "High", const std::string& ttc = "10.000") {
  return {t, EventKind::ThreatIdentified, {{"level", level}, {"track_id", std::to_string(track)}, {"ttc", ttc}}};
}
TraceEvent command(double t, int track) {
  return {t, EventKind::CommandIssued, {{"kind", "LevelLeft"}, {"track_id", std::to_string(track)}}};
}
TraceEvent terminated(double t, int track) {
  return {t, EventKind::ManeuverTerminated, {{"track_id", std::to_string(track)}}};
}

}  // namespace

TEST_CASE("c1 holds when a command follows every threat within the horizon") {
  const auto tr = merged(50, {threat(1.0, 1), command(1.5, 1)});
  MonitorConfig cfg;
  cfg.horizon_h = 5;
  CHECK(check_c1(tr, cfg).status == VerdictStatus::Satisfied);
  cfg.horizon_h = 4;
  const auto v = check_c1(tr, cfg);
  REQUIRE(v.status == VerdictStatus::Violated);
  REQUIRE(v.witness);
  CHECK(v.witness->tick == 10);
  CHECK(v.witness->t == doctest::Approx(1.0));
}

TEST_CASE("c1 is vacuous without threats") {
  CHECK(check_c1(parse(frames(10))).status == VerdictStatus::Vacuous);
  CHECK(check_c1(std::vector<TraceEvent>{}).status == VerdictStatus::Vacuous);
}

TEST_CASE("c1 reports the first unanswered threat") {
  const auto tr = merged(100, {threat(0.5, 1), command(0.5, 1), threat(5.0, 2)});
  const auto v = check_c1(tr);
  REQUIRE(v.witness);
  CHECK(v.witness->tick == 50);
}

TEST_CASE("guarded c2 only obliges a command for detections that become threats") {
  const auto benign = merged(40, {detected(0.2, "A"), evaluated(0.2, 1, "A")});
  CHECK(check_c2(benign).status == VerdictStatus::Satisfied);

  MonitorConfig raw;
  raw.raw_c2 = true;
  const auto v = check_c2(benign, raw);
  REQUIRE(v.status == VerdictStatus::Violated);
  CHECK(v.witness->tick == 2);

  const auto threatening = merged(40, {detected(0.2, "A"), evaluated(0.4, 1, "A"), threat(0.4, 1)});
  const auto g = check_c2(threatening);
  REQUIRE(g.status == VerdictStatus::Violated);
  CHECK(g.witness->tick == 2);

  const auto answered =
      merged(40, {detected(0.2, "A"), evaluated(0.4, 1, "A"), threat(0.4, 1), command(0.4, 1)});
  CHECK(check_c2(answered).status == VerdictStatus::Satisfied);
  CHECK(check_c2(answered, raw).status == VerdictStatus::Satisfied);
}

TEST_CASE("c2 links threats to detections through the measure id") {
  // B becomes a threat, A does not; A's detection carries no obligation.
  const auto tr = merged(60, {detected(0.1, "A"), evaluated(0.1, 1, "A"), detected(4.0, "B"),
                              evaluated(4.0, 2, "B"), threat(4.0, 2)});
  const auto v = check_c2(tr);
  REQUIRE(v.status == VerdictStatus::Violated);
  CHECK(v.witness->tick == 40);
}

TEST_CASE("c3 requires an evaluation of the same measure within the horizon") {
  const auto ok = merged(40, {detected(0.2, "A"), evaluated(0.3, 1, "A"), detected(0.3, "B"),
                              evaluated(0.3, 2, "B")});
  CHECK(check_c3(ok).status == VerdictStatus::Satisfied);

  const auto wrong = merged(40, {detected(0.2, "A"), evaluated(0.3, 1, "B")});
  const auto v = check_c3(wrong);
  REQUIRE(v.status == VerdictStatus::Violated);
  CHECK(v.witness->tick == 2);

  const auto late = merged(60, {detected(0.2, "A"), evaluated(2.3, 1, "A")});
  CHECK(check_c3(late).status == VerdictStatus::Violated);
  MonitorConfig wide;
  wide.horizon_h = 21;
  CHECK(check_c3(late, wide).status == VerdictStatus::Satisfied);

  CHECK(check_c3(parse(frames(5))).status == VerdictStatus::Vacuous);
}

TEST_CASE("threat handling accepts targeted and dominated threats") {
  TickSnapshot s;
  s.t = 1.0;
  s.threats = {{1, ThreatLevel::High, 8.0, true, 0.0}, {2, ThreatLevel::Low, 20.0, true, 50.0}};
  s.active_track = 1;
  CHECK(check_threat_handling(std::vector<TickSnapshot>{s}).status == VerdictStatus::Satisfied);

  // Same level: not dominated.
  s.threats[1].threat_level = ThreatLevel::High;
  auto v = check_threat_handling(std::vector<TickSnapshot>{TickSnapshot{}, s});
  REQUIRE(v.status == VerdictStatus::Violated);
  CHECK(v.witness->tick == 1);

  // Higher level but later: not dominated either.
  s.threats = {{1, ThreatLevel::High, 25.0, true, 0.0}, {2, ThreatLevel::Low, 20.0, true, 50.0}};
  CHECK(check_threat_handling(std::vector<TickSnapshot>{s}).status == VerdictStatus::Violated);

  s.active_track.reset();
  s.threats = {{1, ThreatLevel::High, 8.0, true, 0.0}};
  CHECK(check_threat_handling(std::vector<TickSnapshot>{s}).status == VerdictStatus::Violated);

  s.threats = {{1, ThreatLevel::None, INFINITY, false, 900.0}};
  CHECK(check_threat_handling(std::vector<TickSnapshot>{s}).status == VerdictStatus::Vacuous);
}

TEST_CASE("snapshots rebuilt from a trace follow commands and terminations") {
  const auto tr = merged(5, {threat(0.1, 3), command(0.1, 3), threat(0.2, 3), terminated(0.3, 3),
                             threat(0.4, 3, "Low", "30.000")});
  const auto snaps = snapshots_from_trace(tr);
  REQUIRE(snaps.size() == 5);
  CHECK_FALSE(snaps[0].active_track);
  CHECK(snaps[1].active_track == 3);
  CHECK(snaps[2].active_track == std::nullopt);
  CHECK(snaps[2].threats.size() == 1);
  CHECK_FALSE(snaps[3].active_track);
  CHECK(snaps[4].threats[0].threat_level == ThreatLevel::Low);
  const auto v = check_threat_handling(snaps);
  REQUIRE(v.status == VerdictStatus::Violated);
  CHECK(v.witness->t == doctest::Approx(0.2));
}

TEST_CASE("malformed traces are rejected") {
  auto tr = merged(5, {threat(0.1, 1)});
  tr.back().t = 0.05;
  CHECK_THROWS_AS(check_c1(tr), MalformedTrace);

  auto missing = merged(5, {TraceEvent{0.2, EventKind::ThreatIdentified, {{"level", "High"}}}});
  CHECK_THROWS_AS(check_c1(missing), MalformedTrace);

  auto bad = merged(5, {TraceEvent{0.2, EventKind::ThreatIdentified, {{"track_id", "x1"}}}});
  CHECK_THROWS_AS(check_c1(bad), MalformedTrace);
}

TEST_CASE("tick period can be given explicitly") {
  const std::vector<TraceEvent> tr{threat(1.0, 1), command(3.0, 1)};
  MonitorConfig cfg;
  cfg.tick_period = 0.5;
  cfg.horizon_h = 4;
  CHECK(check_c1(tr, cfg).status == VerdictStatus::Satisfied);
  cfg.horizon_h = 3;
  CHECK(check_c1(tr, cfg).witness->tick == 2);
}

TEST_CASE("verdict lines name the property, status and witness") {
  const auto tr = merged(50, {threat(1.0, 7)});
  const auto all = check_all(tr);
  REQUIRE(all.size() == 4);
  CHECK(format_verdict(all[0]) == "C1              Violated at t=1.000 (tick 10): threat on track 7 not commanded within 20 ticks");
  CHECK(format_verdict(all[2]) == "C3              Vacuous");
}
