#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vlp/channel.hpp"
#include "vlp/localization.hpp"
#include "vlp/units.hpp"

using namespace vlp;
using std::numbers::pi;

namespace {

Luminaire unit_tx() {
  Luminaire tx;
  tx.transmit_power = 1.0;
  tx.lambertian_order = 1.0;
  return tx;
}

Photodiode small_pd() {
  Photodiode pd;
  pd.area = 1e-4;
  pd.fov_half_angle = deg2rad(80.0);
  return pd;
}

Pose at(double x, double y, double z) {
  Pose p;
  p.position = {x, y, z};
  return p;
}

}  // namespace

TEST_CASE("lambertian intensity") {
  CHECK(lambertian_radiant_intensity(0.0, 1.0) == doctest::Approx(1 / pi).epsilon(1e-12));
  CHECK(lambertian_radiant_intensity(0.0, 1.0) == doctest::Approx(0.31831).epsilon(1e-5));
  CHECK(lambertian_radiant_intensity(pi / 2, 6.0) == 0.0);
  CHECK(lambertian_radiant_intensity(2.0, 6.0) == 0.0);

  // cos(15 deg) = 0.9659258, cos(20 deg) = 0.9396926 by hand; ratio^6 = 1.1796
  const double ratio = lambertian_radiant_intensity(deg2rad(15.0), 6.0) / lambertian_radiant_intensity(deg2rad(20.0), 6.0);
  CHECK(ratio == doctest::Approx(1.180).epsilon(1e-3));

  CHECK_THROWS_AS(lambertian_radiant_intensity(0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lambertian_radiant_intensity(std::nan(""), 2.0), std::invalid_argument);
}

TEST_CASE("channel gain") {
  Photodiode pd = small_pd();
  ChannelGeometry g{1.0, 0.0, 0.0};
  CHECK(channel_gain(g, pd, 1.0) == doctest::Approx(3.1831e-5).epsilon(1e-4));

  g.incidence_angle = pd.fov_half_angle + 0.01;
  CHECK(channel_gain(g, pd, 1.0) == 0.0);

  g = {1.3, 0.2, 0.3};
  const double near = channel_gain(g, pd, 3.0);
  g.distance = 2.6;
  CHECK(channel_gain(g, pd, 3.0) == doctest::Approx(near / 4).epsilon(1e-12));

  // wide FoV still rejects light from behind the sensor
  pd.fov_half_angle = deg2rad(160.0);
  g.incidence_angle = deg2rad(100.0);
  CHECK(channel_gain(g, pd, 3.0) == 0.0);

  g.distance = 0;
  CHECK_THROWS_AS(channel_gain(g, pd, 3.0), std::invalid_argument);
}

TEST_CASE("received power examples") {
  const Luminaire tx = unit_tx();
  const Photodiode pd = small_pd();
  NoiseModel quiet;
  CHECK(received_power(tx, at(0, 0, 1), pd, quiet, 1) == doctest::Approx(3.1831e-5).epsilon(1e-4));

  NoiseModel ambient{0.0, 1e-6};
  CHECK(received_power(tx, at(0, 0, 1), pd, ambient, 1) == doctest::Approx(3.2831e-5).epsilon(1e-4));

  // d = sqrt(5), cos psi = cos theta = 2/sqrt(5): 2/pi * 1e-4 * (4/5) / 5
  CHECK(received_power(tx, at(1, 0, 2), pd, quiet, 1) == doctest::Approx(5.0930e-6).epsilon(1e-4));
}

TEST_CASE("received power matches the independent link oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  Photodiode pd = small_pd();
  pd.fov_half_angle = deg2rad(70.0);
  for (int i = 0; i < 200; ++i) {
    Luminaire tx = unit_tx();
    tx.lambertian_order = 1 + 20 * u(rng);
    tx.transmit_power = 0.5 + 5 * u(rng);
    tx.position = {2 * u(rng), 2 * u(rng), 0};
    Pose rx = at(2 * u(rng), 2 * u(rng), 0.1 + 1.9 * u(rng));
    rx.roll = (u(rng) - 0.5) * 0.4;
    rx.pitch = (u(rng) - 0.5) * 0.4;
    rx.yaw = 6 * u(rng);
    const double expected = oracle::los_power({tx.position.x(), tx.position.y(), 0},
                                              {rx.position.x(), rx.position.y(), rx.position.z()}, rx.roll, rx.pitch,
                                              tx.transmit_power, tx.lambertian_order, pd.area, pd.fov_half_angle);
    CHECK(line_of_sight_power(tx, rx, pd) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("received power noise is seeded") {
  const Luminaire tx = unit_tx();
  const Photodiode pd = small_pd();
  NoiseModel noise{1e-6, 0.0};
  const Pose rx = at(0.3, 0.1, 1.2);
  CHECK(received_power(tx, rx, pd, noise, 42) == received_power(tx, rx, pd, noise, 42));
  CHECK(received_power(tx, rx, pd, noise, 42) != received_power(tx, rx, pd, noise, 43));

  const int n = 20000;
  double sum = 0, sq = 0;
  const double clean = line_of_sight_power(tx, rx, pd);
  for (int s = 0; s < n; ++s) {
    const double e = received_power(tx, rx, pd, noise, s) - clean;
    sum += e;
    sq += e * e;
  }
  CHECK(std::abs(sum / n) < 3 * noise.gaussian_sigma / std::sqrt(double(n)));
  CHECK(std::sqrt(sq / n) == doctest::Approx(noise.gaussian_sigma).epsilon(0.03));
}

TEST_CASE("sensitivity of the square-root inversion to a 5 degree angle error") {
  // true psi = theta = 20 deg, inversion assumes 15 deg
  Luminaire tx = unit_tx();
  tx.lambertian_order = 6;
  const double a_r = 1e-4, d_true = 1.5;
  const double psi = deg2rad(20.0), assumed = deg2rad(15.0);
  ChannelGeometry g{d_true, psi, psi};
  Photodiode pd = small_pd();
  pd.area = a_r;
  const double p_r = tx.transmit_power * channel_gain(g, pd, 6.0);

  REQUIRE(distance_tilted(p_r, tx, psi, psi, a_r) == doctest::Approx(d_true).epsilon(1e-12));
  const double total = 100 * (distance_tilted(p_r, tx, assumed, assumed, a_r) / d_true - 1);
  const double tx_term = 100 * (distance_tilted(p_r, tx, assumed, psi, a_r) / d_true - 1);
  const double rx_term = 100 * (distance_tilted(p_r, tx, psi, assumed, a_r) / d_true - 1);

  // hand values: sqrt(1.1796 * 1.0279) = 1.1012, sqrt(1.1796) = 1.0861, sqrt(1.0279) = 1.0139
  CHECK(total == doctest::Approx(10.1).epsilon(0.005));
  CHECK(tx_term == doctest::Approx(8.6).epsilon(0.006));
  CHECK(rx_term == doctest::Approx(1.4).epsilon(0.02));

  // reference figures: more than 10 %, 8.5 % and around 1.5 %
  CHECK(std::abs(total - 10.0) <= 0.5);
  CHECK(std::abs(tx_term - 8.5) <= 0.5);
  CHECK(std::abs(rx_term - 1.5) <= 0.5);
}

TEST_CASE("gain profile") {
  GainProfile unity;
  CHECK(unity.is_unity());
  CHECK(unity(1.0) == 1.0);
  GainProfile table({{0.0, 1.0}, {1.0, 0.5}});
  CHECK(table(0.5) == doctest::Approx(0.75));
  CHECK(table(-1.0) == 1.0);
  CHECK(table(2.0) == 0.5);
  CHECK_THROWS_AS(GainProfile({{0.0, 1.0}, {0.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(GainProfile({{0.0, -1.0}}), std::invalid_argument);

  const Luminaire tx = unit_tx();
  Photodiode pd = small_pd();
  const double plain = line_of_sight_power(tx, at(0.5, 0, 1), pd);
  pd.gain = GainProfile({{0.0, 2.0}, {pi / 2, 2.0}});
  CHECK(line_of_sight_power(tx, at(0.5, 0, 1), pd) == doctest::Approx(2 * plain));
}

TEST_CASE("type invariants") {
  Luminaire tx = unit_tx();
  CHECK_NOTHROW(tx.validate());
  tx.lambertian_order = 0.5;
  CHECK_THROWS(tx.validate());
  tx = unit_tx();
  tx.transmit_power = 0;
  CHECK_THROWS(tx.validate());
  Photodiode pd;
  pd.fov_half_angle = 4;
  CHECK_THROWS(pd.validate());
  NoiseModel n{-1, 0};
  CHECK_THROWS(n.validate());
  CHECK_THROWS(link_geometry(unit_tx(), at(0, 0, 0)));
}

TEST_CASE("float instantiation") {
  LuminaireT<float> tx;
  PhotodiodeT<float> pd;
  pd.area = 1e-4f;
  PoseT<float> rx;
  rx.position = {0, 0, 1};
  CHECK(line_of_sight_power(tx, rx, pd) == doctest::Approx(3.1831e-5).epsilon(1e-4));
}
