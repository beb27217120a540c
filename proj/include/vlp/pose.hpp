#pragma once

#include <algorithm>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace vlp {

/// 6-DoF receiver state. Angles in radians, position in meters.
template <typename Scalar>
struct PoseT {
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  Vector3 position = Vector3::Zero();
  Scalar roll = Scalar(0);
  Scalar pitch = Scalar(0);
  Scalar yaw = Scalar(0);
  Scalar timestamp = Scalar(0);

  /// Body-to-world rotation, yaw-pitch-roll (Z-Y-X) convention.
  Eigen::Matrix<Scalar, 3, 3> rotation() const {
    using Axis = Eigen::AngleAxis<Scalar>;
    return (Axis(yaw, Vector3::UnitZ()) * Axis(pitch, Vector3::UnitY()) *
            Axis(roll, Vector3::UnitX()))
        .toRotationMatrix();
  }

  /// World direction of the body +z axis.
  Vector3 body_up() const { return rotation().col(2); }

  /// Magnitude of the tilt away from level (angle between body up and world up).
  Scalar tilt() const {
    using std::acos;
    return acos(std::clamp(body_up().z(), Scalar(-1), Scalar(1)));
  }
};

using Pose = PoseT<double>;

}  // namespace vlp
