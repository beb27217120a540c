#pragma once

#include <vector>

#include <Eigen/Core>

#include "vlp/beacon.hpp"
#include "vlp/channel.hpp"

namespace vlp {

/// Fixed infrastructure of a positioning cell: anchors, receiver optics and
/// the receiver's noise environment.
struct Testbed {
  Eigen::Vector3d extent{2.0, 2.0, 2.0};  // m, box [0, extent]
  std::vector<Luminaire> luminaires;
  Photodiode photodiode;
  NoiseModel noise;
  double base_frequency = 60.0;  // Hz
  SynthesisOptions synthesis;
  // Extracted RSS at or below this level is treated as "beacon not heard".
  double rss_floor = 0;  // W

  /// Four ground LEDs of a 2 m cube at 60/120/240/480 Hz, P_t = 4.7 W,
  /// m = 14, A_r = 5.2 mm^2, 160 deg FoV.
  static Testbed reference();

  BeaconPlan beacon_plan() const { return BeaconPlan::from_luminaires(base_frequency, luminaires); }

  bool contains(const Eigen::Vector3d& p, double tol = 1e-9) const {
    return (p.array() >= -tol).all() && (p.array() <= extent.array() + tol).all();
  }

  void validate() const;
};

}  // namespace vlp
