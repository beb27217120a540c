#pragma once

// Onboard IMU and barometer models sampled along a ground-truth trajectory.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "vlp/pose.hpp"

namespace vlp {

/// One logged record. Internal units: SI and radians; accelerations in G.
struct SensorFrame {
  double timestamp = 0;
  std::vector<double> rss;                      // W, one per luminaire
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // G, world frame, gravity removed
  double roll = 0;
  double pitch = 0;
  double yaw = 0;
  double baro_altitude = 0;  // m
  Pose ground_truth;
  bool has_ground_truth = true;
};

struct BaroModel {
  double noise_sigma = 0;     // m
  double drift_rate = 0;      // m/s
  double initial_offset = 0;  // m
};

struct ImuModel {
  double accel_noise_sigma = 0;  // G
  Eigen::Vector3d accel_bias = Eigen::Vector3d::Zero();  // G
  double angle_noise_sigma = 0;  // rad
};

struct ImuSample {
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // G
  double roll = 0;
  double pitch = 0;
  double yaw = 0;
};

/// Barometric altitude: truth + offset + drift_rate * t + N(0, sigma).
double sample_baro(double true_altitude, double t, const BaroModel& model, std::uint64_t seed);

/// `true_accel` is the world-frame kinematic acceleration in m/s^2 (gravity
/// already removed); the result is in G with bias and noise applied.
ImuSample sample_imu(const Pose& true_pose, const Eigen::Vector3d& true_accel, const ImuModel& model,
                     std::uint64_t seed);

}  // namespace vlp
