#pragma once

// Closed-form RSS range inversion and linear least-squares trilateration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/QR>

#include "vlp/channel.hpp"
#include "vlp/errors.hpp"
#include "vlp/pose.hpp"

namespace vlp {

/// Range to a transmitter assuming emitter and receiver planes are parallel,
/// so cos(psi) = cos(theta) = h/d:
///   d = [P_t A_r (m+1) h^(m+1) / (2 pi P_r)]^(1/(m+3))
template <typename Scalar>
Scalar distance_parallel(Scalar p_r, Scalar p_t, Scalar a_r, Scalar m, Scalar h) {
  using std::pow;
  if (!(p_r > 0)) throw SignalError("distance_parallel: received power must be > 0");
  if (!(h > 0)) throw GeometryError("distance_parallel: vertical separation must be > 0");
  const Scalar bracket = p_t * a_r * (m + 1) * pow(h, m + 1) / (2 * std::numbers::pi_v<Scalar> * p_r);
  return pow(bracket, Scalar(1) / (m + 3));
}

/// Incidence angle at a tilted receiver from its roll/pitch and the
/// parallel-assumption range:
///   cos(theta) = [dx cos(roll) sin(pitch) + dy sin(roll) sin(pitch) + |dz| cos(pitch)] / d
/// The argument is clamped to [-1, 1].
template <typename Scalar>
Scalar incidence_angle(const PoseT<Scalar>& rx, const Eigen::Matrix<Scalar, 3, 1>& tx_position, Scalar d_parallel) {
  using std::abs;
  using std::acos;
  using std::cos;
  using std::sin;
  if (!(d_parallel > 0)) throw GeometryError("incidence_angle: distance must be > 0");
  const Eigen::Matrix<Scalar, 3, 1> delta = rx.position - tx_position;
  const Scalar tx_term = delta.x() * cos(rx.roll) * sin(rx.pitch);
  const Scalar ty_term = delta.y() * sin(rx.roll) * sin(rx.pitch);
  const Scalar tz_term = abs(delta.z()) * cos(rx.pitch);
  return acos(std::clamp((tx_term + ty_term + tz_term) / d_parallel, Scalar(-1), Scalar(1)));
}

/// Range to a transmitter given both link angles:
///   d = sqrt(P_t A_r (m+1) cos^m(psi) cos(theta) / (2 pi P_r))
template <typename Scalar>
Scalar distance_tilted(Scalar p_r, const LuminaireT<Scalar>& tx, Scalar psi, Scalar theta, Scalar a_r) {
  using std::cos;
  using std::pow;
  using std::sqrt;
  if (!(p_r > 0)) throw SignalError("distance_tilted: received power must be > 0");
  const Scalar cos_psi = cos(psi);
  const Scalar cos_product = (cos_psi > 0 ? pow(cos_psi, tx.lambertian_order) : Scalar(0)) * cos(theta);
  if (!(cos_product > 0)) throw GeometryError("distance_tilted: anchor outside emitter or receiver cone");
  const Scalar m = tx.lambertian_order;
  return sqrt(tx.transmit_power * a_r * (m + 1) * cos_product / (2 * std::numbers::pi_v<Scalar> * p_r));
}

/// Tilted-receiver range with the irradiance angle tied to the unknown range
/// itself (cos(psi) = h/d, exact for upward-facing emitters):
///   d = [P_t A_r (m+1) h^m cos(theta) / (2 pi P_r)]^(1/(m+2))
/// Same model as distance_tilted, but an error in d does not feed back
/// through cos^m(psi).
template <typename Scalar>
Scalar distance_tilted_at_height(Scalar p_r, const LuminaireT<Scalar>& tx, Scalar h, Scalar theta, Scalar a_r) {
  using std::cos;
  using std::pow;
  if (!(p_r > 0)) throw SignalError("distance_tilted_at_height: received power must be > 0");
  if (!(h > 0)) throw GeometryError("distance_tilted_at_height: vertical separation must be > 0");
  const Scalar cos_theta = cos(theta);
  if (!(cos_theta > 0)) throw GeometryError("distance_tilted_at_height: anchor outside the receiver cone");
  const Scalar m = tx.lambertian_order;
  const Scalar bracket =
      tx.transmit_power * a_r * (m + 1) * pow(h, m) * cos_theta / (2 * std::numbers::pi_v<Scalar> * p_r);
  return pow(bracket, Scalar(1) / (m + 2));
}

template <typename Scalar>
struct Trilateration2DT {
  Eigen::Matrix<Scalar, 2, 1> position = Eigen::Matrix<Scalar, 2, 1>::Zero();
  int clamped_anchors = 0;  // anchors whose horizontal range^2 was negative
};

using Trilateration2D = Trilateration2DT<double>;

inline constexpr std::size_t kMaxAnchors = 32;

/// 2D position from 3D ranges and vertical separations. Each range is
/// projected onto the horizontal plane (negative squares clamp to zero) and
/// the difference-of-circles system against the last anchor is solved in the
/// least-squares sense.
template <typename Scalar>
Trilateration2DT<Scalar> trilaterate_2d(std::span<const Eigen::Matrix<Scalar, 2, 1>> anchors,
                                        std::span<const Scalar> distances, std::span<const Scalar> heights) {
  const std::size_t n = anchors.size();
  if (distances.size() != n || heights.size() != n)
    throw std::invalid_argument("trilaterate_2d: anchor, distance and height counts differ");
  if (n < 3) throw GeometryError("trilaterate_2d: at least 3 anchors required");
  if (n > kMaxAnchors) throw std::invalid_argument("trilaterate_2d: too many anchors");

  Trilateration2DT<Scalar> out;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxAnchors, 1> range_sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar r2 = distances[i] * distances[i] - heights[i] * heights[i];
    if (r2 < 0) ++out.clamped_anchors;
    range_sq[i] = std::max(r2, Scalar(0));
  }

  using Design = Eigen::Matrix<Scalar, Eigen::Dynamic, 2, 0, kMaxAnchors, 2>;
  using Rhs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxAnchors, 1>;
  const auto& ref = anchors[n - 1];
  const Scalar ref_term = ref.squaredNorm() - range_sq[n - 1];
  Design a(n - 1, 2);
  Rhs b(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a.row(i) = 2 * (anchors[i] - ref).transpose();
    b[i] = anchors[i].squaredNorm() - range_sq[i] - ref_term;
  }
  if (!(a.cwiseAbs().maxCoeff() > 0)) throw GeometryError("trilaterate_2d: coincident anchors");
  Eigen::ColPivHouseholderQR<Design> qr(a);
  qr.setThreshold(Scalar(1e-9));
  if (qr.rank() < 2) throw GeometryError("trilaterate_2d: anchors are collinear");
  out.position = qr.solve(b);
  return out;
}

}  // namespace vlp
