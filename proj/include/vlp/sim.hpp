#pragma once

// Flight plans, smooth 6-DoF trajectories and the flight runner that turns a
// trajectory into a sensor log.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vlp/pose.hpp"
#include "vlp/sensors.hpp"
#include "vlp/testbed.hpp"
#include "vlp/units.hpp"

namespace vlp {

enum class FlightKind {
  hover,      // hold at (center, cruise_height)
  circle,     // constant-height circle with smooth speed ramps
  lift_land,  // vertical climb height_min -> height_max -> height_min
  waypoints,  // smooth point-to-point legs of equal duration
  route       // lift-off, circling with a direction change and height changes, landing
};

struct FlightPlan {
  std::string name = "circle";
  FlightKind kind = FlightKind::circle;
  double radius = 0.5;                  // m
  Eigen::Vector2d center{1.0, 1.0};     // m
  double height_min = 0.2;              // m
  double height_max = 1.8;              // m
  double cruise_height = 1.0;           // m
  double height_swing = 0.3;            // m, route altitude excursion about cruise_height
  double speed = 0.6;                   // m/s, tangential cruise speed
  bool clockwise = false;
  double duration = 30.0;               // s
  double max_tilt = deg2rad(7.0);       // rad
  double frame_rate = 50.0;             // Hz
  double yaw = 0.0;                     // rad, heading lock
  double yaw_rate = 0.0;                // rad/s, optional spin
  std::vector<Eigen::Vector3d> waypoints;

  void validate() const;
};

struct TrajectorySample {
  Pose pose;
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // m/s
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();     // m/s^2, kinematic (gravity excluded)
};

/// Attitude of a multirotor whose thrust produces `accel`: the body up axis
/// is aligned with accel + g, with the tilt capped at `max_tilt`.
void attitude_from_accel(const Eigen::Vector3d& accel, double yaw, double max_tilt, double& roll, double& pitch);

/// C2 position trajectory sampled at the plan's frame rate. Throws
/// ConfigError when the path leaves `extent`.
std::vector<TrajectorySample> generate_trajectory(const FlightPlan& plan,
                                                  const Eigen::Vector3d& extent = Eigen::Vector3d(2, 2, 2));

struct SensorModels {
  BaroModel baro;
  ImuModel imu;

  /// Crazyflie-class defaults: ~0.1 m barometer noise with slow drift,
  /// ~0.5 deg attitude noise.
  static SensorModels reference();
};

struct FlightLog {
  std::string name;
  std::vector<SensorFrame> frames;
};

/// Per frame: true RSS from the channel model, FDMA synthesis + spectral
/// extraction of a one-base-period window, IMU and barometer samples, truth.
FlightLog run_flight(const Testbed& testbed, const FlightPlan& plan, const SensorModels& sensors,
                     std::uint64_t seed);

/// Built-in plans: "hover", "circle", "lift_land", "flight1".."flight8".
FlightPlan named_flight(const std::string& name);

/// The eight route flights of the evaluation campaign.
std::vector<FlightPlan> default_flight_batch();

}  // namespace vlp
