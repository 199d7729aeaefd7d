#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cas/simulator.hpp"
#include "oracles.hpp"

using namespace cas;

namespace {

Scenario head_on() {
  return load_scenario_file(std::filesystem::path(CAS_SOURCE_DIR) / "scenarios/nominal/head_on.scn");
}

std::vector<TraceEvent> of_kind(const RunResult& r, EventKind k) {
  std::vector<TraceEvent> out;
  std::copy_if(r.trace.begin(), r.trace.end(), std::back_inserter(out), [k](const auto& e) { return e.kind == k; });
  return out;
}

}  // namespace

TEST_CASE("empty airspace produces frames, self-tests and nothing else") {
  Scenario sc = head_on();
  sc.intruders.clear();
  sc.duration = 25;
  const RunResult r = run(sc);
  CHECK(r.snapshots.size() == 251);
  CHECK(std::isinf(r.min_separation));
  CHECK(of_kind(r, EventKind::SensorInputReceived).size() == 251);
  const auto tests = of_kind(r, EventKind::SelfTestResult);
  REQUIRE(tests.size() == 3);
  CHECK(tests[0].payload.at("phase") == "startup");
  CHECK(tests[1].t == doctest::Approx(10.0));
  CHECK(tests[2].payload.at("pass") == "1");
  CHECK(of_kind(r, EventKind::TrafficDetected).empty());
  CHECK(of_kind(r, EventKind::CommandIssued).empty());
  CHECK(r.gclog.size() == 3);
  CHECK(r.csv.substr(0, r.csv.find('\n')) == "t,own_x,own_y,own_z,maneuver");
  CHECK(r.own.back().position.y == doctest::Approx(1250.0));
}

TEST_CASE("head-on threat is answered by a command on the same tick [SRATS_009] [SRATS_012]") {
  const RunResult r = run(head_on());
  const auto threats = of_kind(r, EventKind::ThreatIdentified);
  const auto commands = of_kind(r, EventKind::CommandIssued);
  REQUIRE_FALSE(threats.empty());
  REQUIRE_FALSE(commands.empty());
  CHECK(commands.front().t == threats.front().t);
  CHECK(commands.front().payload.at("track_id") == threats.front().payload.at("track_id"));
  CHECK(r.min_separation > 150.0);
  for (const auto& v : check_all(r.trace)) CHECK(v.status != VerdictStatus::Violated);
  CHECK(check_threat_handling(r.snapshots).status == VerdictStatus::Satisfied);
}

TEST_CASE("disabling the maneuver stage lets the head-on collide") {
  Scenario sc = head_on();
  sc.faults.push_back({FaultKind::StageDisable, 0.0, sc.duration, {{"stage", "maneuver"}}});
  const RunResult r = run(sc);
  CHECK(r.min_separation < 10.0);
  CHECK(of_kind(r, EventKind::CommandIssued).empty());
  CHECK(check_c1(r.trace).status == VerdictStatus::Violated);
}

TEST_CASE("detection matches the brute-force reference on every tick [HLR_001]") {
  for (const char* name : {"crossing_left_above", "high_low_pair", "maneuvering_intruder", "sequential"}) {
    const Scenario sc =
        load_scenario_file(std::filesystem::path(CAS_SOURCE_DIR) / "scenarios/nominal" / (std::string(name) + ".scn"));
    const RunResult r = run(sc);
    std::map<long long, std::set<std::string>> seen;
    for (const auto& ev : r.trace)
      if (ev.kind == EventKind::TrafficDetected) seen[std::llround(ev.t / sc.dt)].insert(ev.payload.at("measure_id"));
    REQUIRE(r.own.size() == r.snapshots.size());
    for (std::size_t k = 0; k < r.own.size(); ++k) {
      CAPTURE(name);
      CAPTURE(k);
      CHECK(oracle_detect(sc, r.own[k]) == seen[static_cast<long long>(k)]);
    }
  }
}

TEST_CASE("sensor failure of both sources suppresses detection inside the window [HLR_012]") {
  Scenario sc = head_on();
  sc.faults.push_back({FaultKind::SensorFailure, 5.0, 10.0, {{"sensor", "both"}}});
  const RunResult r = run(sc);
  for (const auto& ev : r.trace) {
    if (ev.kind == EventKind::TrafficDetected) CHECK((ev.t < 5.0 - 1e-9 || ev.t > 10.0 + 1e-9));
    if (ev.kind == EventKind::SensorAlert) {
      CHECK(ev.t >= 5.0 - 1e-9);
      CHECK(ev.t <= 10.0 + 1e-9);
    }
  }
  CHECK(of_kind(r, EventKind::SensorAlert).size() == 102);
}

TEST_CASE("primary failure fails over to the secondary once [LLR_030]") {
  Scenario sc = head_on();
  sc.faults.push_back({FaultKind::SensorFailure, 5.0, 8.0, {{"sensor", "primary"}}});
  const RunResult r = run(sc);
  const auto fo = of_kind(r, EventKind::FailoverActivated);
  REQUIRE(fo.size() == 1);
  CHECK(fo[0].t == doctest::Approx(5.0));
  CHECK(fo[0].payload.at("to") == "Secondary");
  const auto frames = of_kind(r, EventKind::SensorInputReceived);
  CHECK(frames.back().payload.at("source") == "Secondary");
  CHECK(r.min_separation > 150.0);
}

TEST_CASE("ground link outage drops records and marks the link degraded [LLR_031]") {
  Scenario sc = head_on();
  sc.faults.push_back({FaultKind::CommDelay, 0.0, 5.0, {{"channel", "ground"}}});
  const RunResult r = run(sc);
  const auto sends = of_kind(r, EventKind::GroundLinkSent);
  REQUIRE_FALSE(sends.empty());
  CHECK(sends.front().payload.at("dropped") != "0");
  CHECK(r.gclog.front().rfind("0.000", 0) != 0);
  const auto periodic = of_kind(r, EventKind::SelfTestResult);
  CHECK(periodic.size() == 7);
}

TEST_CASE("runs are deterministic") {
  Scenario sc = head_on();
  sc.faults.push_back({FaultKind::PhantomDetection, 0.0, 60.0, {{"seed", "5"}}});
  const RunResult a = run(sc), b = run(sc);
  CHECK(trace_text(a) == trace_text(b));
  CHECK(gclog_text(a) == gclog_text(b));
  CHECK(a.csv == b.csv);
  CHECK(a.phantom_tracks_confirmed == 0);
  CHECK(a.phantom_commands == 0);
}

TEST_CASE("minimum separation agrees with a dense ground-truth scan of the flown path") {
  const Scenario sc = head_on();
  const RunResult r = run(sc);
  // Straight-line segments between recorded poses bound the truth closely.
  double best = INFINITY;
  for (std::size_t k = 0; k + 1 < r.own.size(); ++k) {
    for (int s = 0; s <= 10; ++s) {
      const double f = s / 10.0;
      const double t = r.own[k].t + f * sc.dt;
      const Vec3 own = r.own[k].position.vec() + f * (r.own[k + 1].position - r.own[k].position);
      best = std::min(best, (sc.intruders[0].position_at(t).vec() - own).norm());
    }
  }
  CHECK(r.min_separation == doctest::Approx(best).epsilon(1e-3));
  CHECK(oracle_min_separation(sc) == r.min_separation);
}
