#include "vlp/sensors.hpp"

#include <random>
#include <stdexcept>

#include "vlp/units.hpp"

namespace vlp {

double sample_baro(double true_altitude, double t, const BaroModel& model, std::uint64_t seed) {
  if (!(model.noise_sigma >= 0)) throw std::invalid_argument("baro: noise sigma must be >= 0");
  if (!(t >= 0)) throw std::invalid_argument("baro: time must be >= 0");
  double h = true_altitude + model.initial_offset + model.drift_rate * t;
  if (model.noise_sigma > 0) {
    std::mt19937_64 rng(seed);
    h += std::normal_distribution<double>(0.0, model.noise_sigma)(rng);
  }
  return h;
}

ImuSample sample_imu(const Pose& true_pose, const Eigen::Vector3d& true_accel, const ImuModel& model,
                     std::uint64_t seed) {
  if (!(model.accel_noise_sigma >= 0 && model.angle_noise_sigma >= 0))
    throw std::invalid_argument("imu: noise sigmas must be >= 0");
  std::mt19937_64 rng(seed);
  ImuSample s;
  s.accel = true_accel / kGravity + model.accel_bias;
  s.roll = true_pose.roll;
  s.pitch = true_pose.pitch;
  s.yaw = true_pose.yaw;
  if (model.accel_noise_sigma > 0) {
    std::normal_distribution<double> gauss(0.0, model.accel_noise_sigma);
    for (int i = 0; i < 3; ++i) s.accel[i] += gauss(rng);
  }
  if (model.angle_noise_sigma > 0) {
    std::normal_distribution<double> gauss(0.0, model.angle_noise_sigma);
    s.roll += gauss(rng);
    s.pitch += gauss(rng);
    s.yaw += gauss(rng);
  }
  return s;
}

}  // namespace vlp
