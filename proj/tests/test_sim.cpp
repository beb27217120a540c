#include <doctest.h>

#include <cmath>

#include "vlp/errors.hpp"
#include "vlp/sim.hpp"

using namespace vlp;

namespace {

Testbed quiet() {
  Testbed tb = Testbed::reference();
  tb.noise = {};
  tb.rss_floor = 0;
  return tb;
}

}  // namespace

TEST_CASE("reference testbed") {
  const Testbed tb = Testbed::reference();
  REQUIRE(tb.luminaires.size() == 4);
  CHECK(tb.luminaires[0].position == Eigen::Vector3d(0.25, 1.0, 0));
  CHECK(tb.luminaires[1].position == Eigen::Vector3d(1.0, 1.75, 0));
  CHECK(tb.luminaires[2].position == Eigen::Vector3d(1.75, 1.0, 0));
  CHECK(tb.luminaires[3].position == Eigen::Vector3d(1.0, 0.25, 0));
  CHECK(tb.luminaires[3].beacon_frequency == 480);
  CHECK(tb.luminaires[0].transmit_power == 4.7);
  CHECK(tb.luminaires[0].lambertian_order == 14);
  CHECK(tb.photodiode.area == doctest::Approx(5.2e-6));
  CHECK(rad2deg(tb.photodiode.fov_half_angle) == doctest::Approx(160));
  CHECK_NOTHROW(tb.validate());

  Testbed bad = tb;
  bad.luminaires[1].position.x() = 2.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = tb;
  bad.luminaires[1].beacon_frequency = 60;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = tb;
  bad.synthesis.sample_rate = 900;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("hover is a constant level pose") {
  const auto traj = generate_trajectory(named_flight("hover"));
  REQUIRE(traj.size() == 501);
  for (const auto& s : traj) {
    CHECK(s.pose.position == traj.front().pose.position);
    CHECK(s.pose.roll == 0.0);
    CHECK(s.pose.pitch == 0.0);
  }
}

TEST_CASE("steady circle tilt") {
  FlightPlan p = named_flight("circle");
  p.max_tilt = deg2rad(30.0);
  const auto traj = generate_trajectory(p);
  // a_c = v^2 / r, tilt = atan(a_c / g)
  const double expected = std::atan(p.speed * p.speed / p.radius / kGravity);
  double prev_dir = NAN;
  bool rotates = false;
  for (const auto& s : traj) {
    if (s.pose.timestamp < 3 || s.pose.timestamp > p.duration - 3) continue;
    CHECK(s.pose.tilt() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(s.velocity.head<2>().norm() == doctest::Approx(p.speed).epsilon(1e-9));
    const double dir = std::atan2(s.accel.y(), s.accel.x());
    if (!std::isnan(prev_dir) && std::abs(dir - prev_dir) > 1e-6) rotates = true;
    prev_dir = dir;
  }
  CHECK(rotates);
}

TEST_CASE("tilt cap and extent") {
  for (int i = 1; i <= 8; ++i) {
    const FlightPlan p = named_flight("flight" + std::to_string(i));
    const auto traj = generate_trajectory(p);
    double top = 0, low = 10, high = 0;
    for (const auto& s : traj) {
      top = std::max(top, s.pose.tilt());
      low = std::min(low, s.pose.position.z());
      high = std::max(high, s.pose.position.z());
      CHECK((s.pose.position.array() >= 0).all());
      CHECK((s.pose.position.array() <= 2).all());
    }
    CHECK(top <= deg2rad(7.0) + 1e-12);
    CHECK(low >= 0.2 - 1e-12);
    CHECK(high <= 1.8 + 1e-12);
  }
  FlightPlan fast = named_flight("circle");
  fast.speed = 3.0;
  double top = 0;
  for (const auto& s : generate_trajectory(fast)) top = std::max(top, s.pose.tilt());
  CHECK(top == doctest::Approx(deg2rad(7.0)).epsilon(1e-9));
}

TEST_CASE("vertical motion does not tilt") {
  for (const auto& s : generate_trajectory(named_flight("lift_land"))) {
    CHECK(s.accel.head<2>().isZero(0));
    CHECK(s.pose.tilt() == doctest::Approx(0.0));
  }
}

TEST_CASE("trajectory is continuous to second order") {
  FlightPlan p = named_flight("flight3");
  p.frame_rate = 1000;
  const auto traj = generate_trajectory(p);
  const double dt = 1.0 / p.frame_rate;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const auto& a = traj[k - 1];
    const auto& b = traj[k];
    CHECK((b.pose.position - a.pose.position - dt * 0.5 * (a.velocity + b.velocity)).norm() < 1e-6);
    CHECK((b.velocity - a.velocity - dt * 0.5 * (a.accel + b.accel)).norm() < 1e-5);
  }
}

TEST_CASE("plans leaving the box are rejected") {
  FlightPlan p = named_flight("circle");
  p.radius = 1.5;
  CHECK_THROWS_AS(generate_trajectory(p), ConfigError);
  p = named_flight("lift_land");
  p.height_max = 2.4;
  CHECK_THROWS_AS(generate_trajectory(p), ConfigError);
  CHECK_THROWS_AS(named_flight("flight9"), ConfigError);
  p = named_flight("circle");
  p.max_tilt = deg2rad(95.0);
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = named_flight("circle");
  p.kind = FlightKind::waypoints;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("waypoint legs") {
  FlightPlan p;
  p.kind = FlightKind::waypoints;
  p.duration = 10;
  p.waypoints = {{0.5, 0.5, 0.3}, {1.5, 0.5, 1.0}, {1.5, 1.5, 1.5}};
  const auto traj = generate_trajectory(p);
  CHECK((traj.front().pose.position - p.waypoints[0]).norm() < 1e-12);
  CHECK((traj[250].pose.position - p.waypoints[1]).norm() < 1e-12);
  CHECK((traj.back().pose.position - p.waypoints[2]).norm() < 1e-12);
}

TEST_CASE("noiseless hover RSS survives the FDMA stage") {
  const Testbed tb = quiet();
  SensorModels clean;
  const auto log = run_flight(tb, named_flight("hover"), clean, 1);
  REQUIRE(log.frames.size() == 501);
  for (const auto& f : log.frames) {
    for (std::size_t i = 0; i < 4; ++i) {
      const double truth = line_of_sight_power(tb.luminaires[i], f.ground_truth, tb.photodiode);
      CHECK(f.rss[i] == doctest::Approx(truth).epsilon(0.005));
    }
    CHECK(f.baro_altitude == f.ground_truth.position.z());
    CHECK(f.accel.isZero(0));
  }
}

TEST_CASE("flight logs are deterministic per seed") {
  const Testbed tb = Testbed::reference();
  const auto a = run_flight(tb, named_flight("flight2"), SensorModels::reference(), 77);
  const auto b = run_flight(tb, named_flight("flight2"), SensorModels::reference(), 77);
  const auto c = run_flight(tb, named_flight("flight2"), SensorModels::reference(), 78);
  REQUIRE(a.frames.size() == b.frames.size());
  bool differs = false;
  for (std::size_t k = 0; k < a.frames.size(); ++k) {
    CHECK(a.frames[k].rss == b.frames[k].rss);
    CHECK(a.frames[k].baro_altitude == b.frames[k].baro_altitude);
    CHECK(a.frames[k].accel == b.frames[k].accel);
    CHECK(a.frames[k].roll == b.frames[k].roll);
    differs = differs || a.frames[k].rss != c.frames[k].rss;
  }
  CHECK(differs);
}

TEST_CASE("default batch") {
  const auto batch = default_flight_batch();
  REQUIRE(batch.size() == 8);
  int logs = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto log = run_flight(Testbed::reference(), batch[i], SensorModels::reference(), i);
    CHECK(log.name == "flight" + std::to_string(i + 1));
    CHECK(log.frames.size() == 1501);
    for (std::size_t k = 1; k < log.frames.size(); ++k) CHECK(log.frames[k].timestamp > log.frames[k - 1].timestamp);
    ++logs;
  }
  CHECK(logs == 8);
}
