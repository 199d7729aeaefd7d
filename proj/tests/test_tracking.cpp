#include <doctest.h>

#include "cas/tracking.hpp"

using namespace cas;

namespace {

DetectionOutput frame(double t, std::vector<DetectedTraffic> traffic) {
  DetectionOutput d;
  d.t = t;
  d.traffic = std::move(traffic);
  d.traffic_detected = !d.traffic.empty();
  return d;
}

TrackSet step(const TrackSet& ts, const DetectionOutput& d, const TrackingConfig& cfg = {}) {
  return coast_and_drop(associate_and_update(ts, d, d.t, cfg), d.t, cfg);
}

// Truth: constant velocity from p0.
Position at(Position p0, Velocity v, double t) { return p0 + t * v.vec(); }

}  // namespace

TEST_CASE("first detection opens a tentative track [LLR_014]") {
  const auto ts = step({}, frame(0.0, {{"A", {100, 200, 300}}}));
  REQUIRE(ts.tracks.size() == 1);
  const Track& tr = ts.tracks[0];
  CHECK(tr.track_id == 1);
  CHECK(tr.position == Position{100, 200, 300});
  CHECK(tr.velocity == Velocity{});
  CHECK_FALSE(tr.confirmed());
  CHECK(tr.hits == 1);
  CHECK(ts.next_id == 2);
}

TEST_CASE("second hit initialises the velocity by differencing [LLR_014]") {
  auto ts = step({}, frame(0.0, {{"A", {0, 0, 0}}}));
  ts = step(ts, frame(0.5, {{"A", {10, -5, 2}}}));
  REQUIRE(ts.tracks.size() == 1);
  CHECK(ts.tracks[0].velocity.vx == doctest::Approx(20));
  CHECK(ts.tracks[0].velocity.vy == doctest::Approx(-10));
  CHECK(ts.tracks[0].velocity.vz == doctest::Approx(4));
}

TEST_CASE("every frame updates each associated track [LLR_015]") {
  const Velocity v{0, -50, 0};
  TrackSet ts;
  for (int k = 0; k < 10; ++k) {
    const double t = 0.1 * k;
    ts = step(ts, frame(t, {{"A", at({0, 3000, 1000}, v, t)}}));
    REQUIRE(ts.tracks.size() == 1);
    CHECK(ts.tracks[0].last_update == t);
    CHECK(ts.tracks[0].history_len == k + 1);
  }
}

TEST_CASE("alpha-beta correction moves halfway towards the measurement [LLR_015]") {
  auto ts = step({}, frame(0.0, {{"A", {0, 0, 0}}}));
  ts = step(ts, frame(1.0, {{"A", {10, 0, 0}}}));
  ts = step(ts, frame(2.0, {{"A", {24, 0, 0}}}));  // predicted 20, residual 4
  CHECK(ts.tracks[0].position.x == doctest::Approx(22.0));
  CHECK(ts.tracks[0].velocity.vx == doctest::Approx(10.4));
}

TEST_CASE("association prefers the nearest measurement and respects the gate [LLR_015]") {
  auto ts = step({}, frame(0.0, {{"A", {0, 0, 0}}, {"B", {1000, 0, 0}}}));
  ts = step(ts, frame(0.1, {{"far", {0, 250, 0}}, {"B2", {1001, 0, 0}}}));
  REQUIRE(ts.tracks.size() == 3);
  const Track* a = ts.find(1);
  const Track* b = ts.find(2);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->hits == 0);                 // 250 m is outside the 200 m gate
  CHECK(b->last_measure_id == "B2");
  CHECK(ts.tracks[2].last_measure_id == "far");
}

TEST_CASE("tracks coast while undetected and are dropped after the timeout [LLR_016]") {
  TrackingConfig cfg;
  auto ts = step({}, frame(0.0, {{"A", {0, 0, 0}}}), cfg);
  ts = step(ts, frame(1.0, {{"A", {0, 10, 0}}}), cfg);
  ts = step(ts, frame(3.0, {}), cfg);
  REQUIRE(ts.tracks.size() == 1);
  CHECK(ts.tracks[0].hits == 0);
  CHECK(ts.tracks[0].position.y == doctest::Approx(30));
  ts = step(ts, frame(6.0, {}), cfg);
  CHECK(ts.tracks.size() == 1);  // exactly drop_after since the last update
  ts = step(ts, frame(6.1, {}), cfg);
  CHECK(ts.tracks.empty());
  CHECK(ts.next_id == 2);  // ids are not recycled
}

TEST_CASE("track accuracy is checked against both bounds [LLR_017]") {
  Track tr;
  tr.position = {0, 0, 0};
  tr.velocity = {0, 0, 0};
  const TrackingConfig cfg;
  CHECK(check_accuracy(tr, {30, 40, 0}, {6, 8, 0}, cfg).pass);
  CHECK_FALSE(check_accuracy(tr, {30, 40.1, 0}, {0, 0, 0}, cfg).pass);
  const auto r = check_accuracy(tr, {0, 0, 0}, {0, 0, 10.5}, cfg);
  CHECK_FALSE(r.pass);
  CHECK(r.velocity_error == doctest::Approx(10.5));
}

TEST_CASE("noiseless constant-velocity track meets accuracy after confirmation [LLR_017] [HLR_005]") {
  const Position p0{-800, 2000, 950};
  const Velocity v{35, -40, 2};
  TrackSet ts;
  for (int k = 0; k < 6; ++k) ts = step(ts, frame(0.1 * k, {{"A", at(p0, v, 0.1 * k)}}));
  REQUIRE(ts.tracks.size() == 1);
  CHECK(ts.tracks[0].confirmed());
  const auto r = check_accuracy(ts.tracks[0], at(p0, v, 0.5), v, {});
  CHECK(r.pass);
  CHECK(r.velocity_error < 1e-6);
}

TEST_CASE("confirmation needs confirm_m consecutive hits [LLR_032] [HLR_005]") {
  TrackSet ts;
  ts = step(ts, frame(0.0, {{"A", {0, 0, 0}}}));
  ts = step(ts, frame(0.1, {{"A", {0, 1, 0}}}));
  CHECK_FALSE(ts.tracks[0].confirmed());
  ts = step(ts, frame(0.2, {{"A", {0, 2, 0}}}));
  CHECK(ts.tracks[0].confirmed());
}

TEST_CASE("intermittent returns never confirm a track [LLR_032]") {
  TrackSet ts;
  for (int k = 0; k < 40; ++k) {
    const double t = 0.1 * k;
    std::vector<DetectedTraffic> d;
    if (k % 2 == 0) d.push_back({"P", {500, 500, 0}});
    ts = step(ts, frame(t, d));
    for (const auto& tr : ts.tracks) CHECK_FALSE(tr.confirmed());
  }
}

TEST_CASE("confirmed status survives a coasting gap") {
  TrackSet ts;
  for (int k = 0; k < 3; ++k) ts = step(ts, frame(0.1 * k, {{"A", {0, 10.0 * k, 0}}}));
  REQUIRE(ts.tracks[0].confirmed());
  ts = step(ts, frame(0.3, {}));
  CHECK(ts.tracks[0].confirmed());
  CHECK(ts.tracks[0].hits == 0);
}

TEST_CASE("track set serialisation is bit-exact and repeatable") {
  TrackSet a, b;
  for (int k = 0; k < 5; ++k) {
    const auto d = frame(0.1 * k, {{"A", {0.1 * k, 3.0 * k, 1000}}, {"B", {500, -7.0 * k, 900}}});
    a = step(a, d);
    b = step(b, d);
  }
  CHECK(serialize(a) == serialize(b));
  CHECK(serialize(a).find("next_id=3") == 0);
}

TEST_CASE("tracking configuration validity") {
  TrackingConfig cfg;
  CHECK(cfg.valid());
  cfg.confirm_m = 0;
  CHECK_FALSE(cfg.valid());
  cfg = {};
  cfg.alpha = 0.0;
  CHECK_FALSE(cfg.valid());
}
