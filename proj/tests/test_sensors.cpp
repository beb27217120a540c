#include <doctest.h>

#include <cmath>

#include "vlp/sensors.hpp"
#include "vlp/units.hpp"

using namespace vlp;

TEST_CASE("baro examples") {
  BaroModel clean;
  CHECK(sample_baro(1.0, 0.0, clean, 1) == 1.0);
  BaroModel ramp;
  ramp.drift_rate = 0.001;
  CHECK(sample_baro(1.0, 60.0, ramp, 1) == doctest::Approx(1.06).epsilon(1e-12));
  ramp.initial_offset = -0.2;
  CHECK(sample_baro(1.0, 60.0, ramp, 1) == doctest::Approx(0.86).epsilon(1e-12));
  CHECK_THROWS(sample_baro(1.0, -1.0, clean, 1));
}

TEST_CASE("baro noise is unbiased and seeded") {
  BaroModel noisy;
  noisy.noise_sigma = 0.05;
  CHECK(sample_baro(1.0, 3.0, noisy, 9) == sample_baro(1.0, 3.0, noisy, 9));
  const int n = 10000;
  double sum = 0;
  for (int s = 0; s < n; ++s) sum += sample_baro(1.0, 0.0, noisy, s);
  CHECK(std::abs(sum / n - 1.0) < 3 * noisy.noise_sigma / std::sqrt(double(n)));
}

TEST_CASE("imu examples") {
  Pose level;
  ImuModel clean;
  const auto hover = sample_imu(level, Eigen::Vector3d::Zero(), clean, 1);
  CHECK(hover.accel.isZero(0));

  ImuModel biased;
  biased.accel_bias = {0, 0, 0.01};
  CHECK(sample_imu(level, Eigen::Vector3d::Zero(), biased, 1).accel.z() == doctest::Approx(0.01));

  Pose tilted;
  tilted.roll = 0.03;
  tilted.pitch = -0.05;
  tilted.yaw = 1.2;
  const auto s = sample_imu(tilted, Eigen::Vector3d(0, 0, kGravity), clean, 1);
  CHECK(s.roll == tilted.roll);
  CHECK(s.pitch == tilted.pitch);
  CHECK(s.yaw == tilted.yaw);
  CHECK(s.accel.z() == doctest::Approx(1.0));
}

TEST_CASE("imu noise statistics") {
  ImuModel noisy;
  noisy.accel_noise_sigma = 0.02;
  noisy.angle_noise_sigma = deg2rad(0.5);
  Pose p;
  const auto a = sample_imu(p, Eigen::Vector3d::Zero(), noisy, 3);
  const auto b = sample_imu(p, Eigen::Vector3d::Zero(), noisy, 3);
  CHECK(a.accel == b.accel);
  CHECK(a.roll == b.roll);

  const int n = 10000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  double roll_sq = 0;
  for (int s = 0; s < n; ++s) {
    const auto x = sample_imu(p, Eigen::Vector3d::Zero(), noisy, s);
    sum += x.accel;
    roll_sq += x.roll * x.roll;
  }
  CHECK((sum / n).cwiseAbs().maxCoeff() < 3 * noisy.accel_noise_sigma / std::sqrt(double(n)));
  CHECK(std::sqrt(roll_sq / n) == doctest::Approx(noisy.angle_noise_sigma).epsilon(0.04));

  ImuModel bad;
  bad.accel_noise_sigma = -1;
  CHECK_THROWS(sample_imu(p, Eigen::Vector3d::Zero(), bad, 1));
}
