#include "vlp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vlp/beacon.hpp"
#include "vlp/channel.hpp"
#include "vlp/errors.hpp"
#include "vlp/rng.hpp"

namespace vlp {
namespace {

// Piecewise quintic blend through (t_k, v_k) with zero slope and curvature at
// every knot, so value, first and second derivative are continuous.
class SmoothProfile {
 public:
  struct Sample {
    double value, rate, curvature;
  };

  SmoothProfile() = default;
  SmoothProfile(std::vector<double> t, std::vector<double> v) : t_(std::move(t)), v_(std::move(v)) {
    if (t_.empty() || t_.size() != v_.size()) throw std::invalid_argument("profile: bad knots");
    for (std::size_t i = 1; i < t_.size(); ++i)
      if (!(t_[i] > t_[i - 1])) throw std::invalid_argument("profile: knot times must increase");
  }

  static SmoothProfile constant(double v) { return SmoothProfile({0.0}, {v}); }

  Sample operator()(double t) const {
    if (t <= t_.front()) return {v_.front(), 0, 0};
    if (t >= t_.back()) return {v_.back(), 0, 0};
    const std::size_t k = segment(t);
    const double span = t_[k + 1] - t_[k];
    const double u = (t - t_[k]) / span;
    const double dv = v_[k + 1] - v_[k];
    const double s = u * u * u * (10 - 15 * u + 6 * u * u);
    const double ds = 30 * u * u * (1 - 2 * u + u * u);
    const double dds = 60 * u * (1 - 3 * u + 2 * u * u);
    return {v_[k] + dv * s, dv * ds / span, dv * dds / (span * span)};
  }

  // Integral of the profile from the first knot to t.
  double integral(double t) const {
    if (t <= t_.front()) return v_.front() * (t - t_.front());
    double acc = 0;
    for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
      const double span = t_[k + 1] - t_[k];
      const double end = std::min(t, t_[k + 1]);
      const double u = (end - t_[k]) / span;
      const double big_s = u * u * u * u * (2.5 - 3 * u + u * u);
      acc += span * (v_[k] * u + (v_[k + 1] - v_[k]) * big_s);
      if (t <= t_[k + 1]) return acc;
    }
    return acc + v_.back() * (t - t_.back());
  }

 private:
  std::size_t segment(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    return static_cast<std::size_t>(std::distance(t_.begin(), it)) - 1;
  }

  std::vector<double> t_;
  std::vector<double> v_;
};

// Position profiles: either a circle (angle + height) or independent axes.
struct PathModel {
  bool circular = false;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0;
  SmoothProfile angular_rate;  // rad/s
  SmoothProfile axis[3];

  void sample(double t, Eigen::Vector3d& p, Eigen::Vector3d& v, Eigen::Vector3d& a) const {
    const auto z = axis[2](t);
    if (circular) {
      const double phi = angular_rate.integral(t);
      const auto w = angular_rate(t);
      const double c = std::cos(phi), s = std::sin(phi);
      p = {center.x() + radius * c, center.y() + radius * s, z.value};
      v = {-radius * s * w.value, radius * c * w.value, z.rate};
      a = {radius * (-s * w.rate - c * w.value * w.value), radius * (c * w.rate - s * w.value * w.value),
           z.curvature};
    } else {
      for (int i = 0; i < 3; ++i) {
        const auto q = axis[i](t);
        p[i] = q.value;
        v[i] = q.rate;
        a[i] = q.curvature;
      }
    }
  }
};

PathModel build_path(const FlightPlan& plan) {
  PathModel m;
  const double d = plan.duration;
  const double omega = (plan.clockwise ? -1.0 : 1.0) * plan.speed / std::max(plan.radius, 1e-12);
  switch (plan.kind) {
    case FlightKind::hover:
      m.axis[0] = SmoothProfile::constant(plan.center.x());
      m.axis[1] = SmoothProfile::constant(plan.center.y());
      m.axis[2] = SmoothProfile::constant(plan.cruise_height);
      break;
    case FlightKind::lift_land:
      m.axis[0] = SmoothProfile::constant(plan.center.x());
      m.axis[1] = SmoothProfile::constant(plan.center.y());
      m.axis[2] = SmoothProfile({0, d / 2, d}, {plan.height_min, plan.height_max, plan.height_min});
      break;
    case FlightKind::circle: {
      m.circular = true;
      m.center = plan.center;
      m.radius = plan.radius;
      const double ramp = std::min(2.0, d / 4);
      m.angular_rate = SmoothProfile({0, ramp, d - ramp, d}, {0, omega, omega, 0});
      m.axis[2] = SmoothProfile::constant(plan.cruise_height);
      break;
    }
    case FlightKind::route: {
      // Nominal 30 s script, stretched to the plan duration.
      const double k = d / 30.0;
      const double z0 = plan.height_min, hc = plan.cruise_height, sw = plan.height_swing;
      m.circular = true;
      m.center = plan.center;
      m.radius = plan.radius;
      m.axis[2] = SmoothProfile({0, 1 * k, 6 * k, 11 * k, 16 * k, 20 * k, 24 * k, 29 * k, 30 * k},
                                {z0, z0, hc, hc + sw, hc, hc - sw, hc, z0, z0});
      m.angular_rate = SmoothProfile({0, 6 * k, 8 * k, 13 * k, 16 * k, 21 * k, 24 * k, 30 * k},
                                     {0, 0, omega, omega, -omega, -omega, 0, 0});
      break;
    }
    case FlightKind::waypoints: {
      const auto& wp = plan.waypoints;
      std::vector<double> t(wp.size());
      std::vector<double> c[3];
      for (std::size_t i = 0; i < wp.size(); ++i) {
        t[i] = wp.size() == 1 ? 0.0 : d * static_cast<double>(i) / static_cast<double>(wp.size() - 1);
        for (int j = 0; j < 3; ++j) c[j].push_back(wp[i][j]);
      }
      for (int j = 0; j < 3; ++j) m.axis[j] = SmoothProfile(t, c[j]);
      break;
    }
  }
  return m;
}

}  // namespace

void FlightPlan::validate() const {
  if (!(duration > 0)) throw ConfigError("flight '" + name + "': duration must be > 0");
  if (!(frame_rate > 0)) throw ConfigError("flight '" + name + "': frame rate must be > 0");
  if (!(max_tilt >= 0 && max_tilt < deg2rad(90.0))) throw ConfigError("flight '" + name + "': max tilt must be < 90 deg");
  if ((kind == FlightKind::circle || kind == FlightKind::route) && !(radius > 0))
    throw ConfigError("flight '" + name + "': radius must be > 0");
  if (kind == FlightKind::waypoints && waypoints.empty())
    throw ConfigError("flight '" + name + "': waypoint plan without waypoints");
  if (!(height_max >= height_min)) throw ConfigError("flight '" + name + "': height range is empty");
}

void attitude_from_accel(const Eigen::Vector3d& accel, double yaw, double max_tilt, double& roll, double& pitch) {
  Eigen::Vector3d thrust(accel.x(), accel.y(), accel.z() + kGravity);
  // heading frame
  const double c = std::cos(yaw), s = std::sin(yaw);
  Eigen::Vector3d up(c * thrust.x() + s * thrust.y(), -s * thrust.x() + c * thrust.y(), thrust.z());
  up.normalize();
  const double horizontal = std::hypot(up.x(), up.y());
  if (std::atan2(horizontal, up.z()) > max_tilt) {
    const double scale = std::sin(max_tilt) / horizontal;
    up = Eigen::Vector3d(up.x() * scale, up.y() * scale, std::cos(max_tilt));
  }
  // body up = (sin(pitch) cos(roll), -sin(roll), cos(pitch) cos(roll))
  roll = std::asin(std::clamp(-up.y(), -1.0, 1.0));
  pitch = std::atan2(up.x(), up.z());
}

std::vector<TrajectorySample> generate_trajectory(const FlightPlan& plan, const Eigen::Vector3d& extent) {
  plan.validate();
  const PathModel path = build_path(plan);
  const auto frames = static_cast<std::size_t>(std::floor(plan.duration * plan.frame_rate + 1e-9)) + 1;
  std::vector<TrajectorySample> out(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    auto& s = out[k];
    const double t = static_cast<double>(k) / plan.frame_rate;
    path.sample(t, s.pose.position, s.velocity, s.accel);
    if ((s.pose.position.array() < -1e-9).any() || (s.pose.position.array() > extent.array() + 1e-9).any())
      throw ConfigError("flight '" + plan.name + "' leaves the testbed extent at t=" + std::to_string(t) + " s");
    s.pose.timestamp = t;
    s.pose.yaw = plan.yaw + plan.yaw_rate * t;
    attitude_from_accel(s.accel, s.pose.yaw, plan.max_tilt, s.pose.roll, s.pose.pitch);
  }
  return out;
}

SensorModels SensorModels::reference() {
  SensorModels m;
  m.baro.noise_sigma = 0.1;
  m.baro.drift_rate = 0.001;
  m.imu.accel_noise_sigma = 0.01;
  m.imu.angle_noise_sigma = deg2rad(0.5);
  return m;
}

FlightLog run_flight(const Testbed& testbed, const FlightPlan& plan, const SensorModels& sensors,
                     std::uint64_t seed) {
  testbed.validate();
  const auto trajectory = generate_trajectory(plan, testbed.extent);
  const BeaconPlan beacons = testbed.beacon_plan();
  const double window = 1.0 / testbed.base_frequency;

  enum Stream : std::uint64_t { kBeacon = 1, kBaro = 2, kImu = 3 };

  FlightLog log;
  log.name = plan.name;
  log.frames.reserve(trajectory.size());
  std::vector<double> truth(testbed.luminaires.size());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const auto& s = trajectory[k];
    for (std::size_t i = 0; i < truth.size(); ++i)
      truth[i] = line_of_sight_power(testbed.luminaires[i], s.pose, testbed.photodiode);

    SynthesisOptions synth = testbed.synthesis;
    synth.start_time = s.pose.timestamp;
    const auto wave = synthesize_composite(truth, beacons, window, testbed.noise, derive_seed(seed, kBeacon, k), synth);

    SensorFrame f;
    f.timestamp = s.pose.timestamp;
    f.rss = extract_rss(wave, beacons);
    const ImuSample imu = sample_imu(s.pose, s.accel, sensors.imu, derive_seed(seed, kImu, k));
    f.accel = imu.accel;
    f.roll = imu.roll;
    f.pitch = imu.pitch;
    f.yaw = imu.yaw;
    f.baro_altitude = sample_baro(s.pose.position.z(), s.pose.timestamp, sensors.baro, derive_seed(seed, kBaro, k));
    f.ground_truth = s.pose;
    log.frames.push_back(std::move(f));
  }
  return log;
}

FlightPlan named_flight(const std::string& name) {
  FlightPlan p;
  p.name = name;
  if (name == "hover") {
    p.kind = FlightKind::hover;
    p.duration = 10.0;
  } else if (name == "circle") {
    p.kind = FlightKind::circle;
  } else if (name == "lift_land") {
    p.kind = FlightKind::lift_land;
    p.duration = 20.0;
  } else if (name.rfind("flight", 0) == 0 && name.size() == 7 && name[6] >= '1' && name[6] <= '8') {
    const int i = name[6] - '1';
    p.kind = FlightKind::route;
    p.cruise_height = 0.5 + i * (1.0 / 7.0);
    p.height_swing = 0.3;
    p.speed = 0.45 + 0.3 * ((i * 3) % 8) / 7.0;
    p.clockwise = (i % 2) == 1;
  } else {
    throw ConfigError("unknown flight '" + name + "'");
  }
  return p;
}

std::vector<FlightPlan> default_flight_batch() {
  std::vector<FlightPlan> out;
  for (int i = 1; i <= 8; ++i) out.push_back(named_flight("flight" + std::to_string(i)));
  return out;
}

}  // namespace vlp
