#pragma once

// Line-of-sight optical link between a Lambertian LED and a photodiode.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vlp/pose.hpp"

namespace vlp {

template <typename Scalar>
struct LuminaireT {
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  int id = 0;
  Vector3 position = Vector3::Zero();
  Scalar transmit_power = Scalar(1);    // W
  Scalar lambertian_order = Scalar(1);  // m >= 1
  Scalar beacon_frequency = Scalar(60); // Hz
  // Emitter surface normal; ground-mounted LEDs face up.
  Vector3 normal = Vector3::UnitZ();

  void validate() const {
    if (!(transmit_power > 0)) throw std::invalid_argument("luminaire: transmit power must be > 0");
    if (!(lambertian_order >= 1)) throw std::invalid_argument("luminaire: Lambertian order must be >= 1");
    if (!(beacon_frequency > 0)) throw std::invalid_argument("luminaire: beacon frequency must be > 0");
    if (!position.allFinite()) throw std::invalid_argument("luminaire: non-finite position");
    using std::abs;
    if (abs(normal.norm() - Scalar(1)) > Scalar(1e-6))
      throw std::invalid_argument("luminaire: normal must be a unit vector");
  }
};

/// Optical gain of the photodiode as a function of incidence angle.
/// Empty table means unity gain; otherwise piecewise-linear between samples,
/// held constant beyond the first and last sample.
template <typename Scalar>
class GainProfileT {
 public:
  GainProfileT() = default;

  /// `table` holds (angle [rad], gain) pairs sorted by angle.
  explicit GainProfileT(std::vector<std::pair<Scalar, Scalar>> table) : table_(std::move(table)) {
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (!(table_[i].second >= 0)) throw std::invalid_argument("gain profile: gains must be >= 0");
      if (i > 0 && !(table_[i].first > table_[i - 1].first))
        throw std::invalid_argument("gain profile: angles must be strictly increasing");
    }
  }

  bool is_unity() const { return table_.empty(); }

  Scalar operator()(Scalar theta) const {
    if (table_.empty()) return Scalar(1);
    if (theta <= table_.front().first) return table_.front().second;
    if (theta >= table_.back().first) return table_.back().second;
    auto hi = std::upper_bound(table_.begin(), table_.end(), theta,
                               [](Scalar v, const auto& p) { return v < p.first; });
    auto lo = std::prev(hi);
    const Scalar t = (theta - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  }

 private:
  std::vector<std::pair<Scalar, Scalar>> table_;
};

template <typename Scalar>
struct PhotodiodeT {
  Scalar area = Scalar(1e-4);  // m^2
  Scalar fov_half_angle = std::numbers::pi_v<Scalar> / 2;  // rad
  GainProfileT<Scalar> gain{};

  void validate() const {
    if (!(area > 0)) throw std::invalid_argument("photodiode: area must be > 0");
    if (!(fov_half_angle > 0 && fov_half_angle <= std::numbers::pi_v<Scalar>))
      throw std::invalid_argument("photodiode: FoV half-angle must be in (0, pi]");
  }
};

template <typename Scalar>
struct ChannelGeometryT {
  Scalar distance = Scalar(1);          // m
  Scalar irradiance_angle = Scalar(0);  // psi, rad
  Scalar incidence_angle = Scalar(0);   // theta, rad
};

template <typename Scalar>
struct NoiseModelT {
  Scalar gaussian_sigma = Scalar(0);  // W
  Scalar ambient_dc = Scalar(0);      // W

  void validate() const {
    if (!(gaussian_sigma >= 0)) throw std::invalid_argument("noise: sigma must be >= 0");
    if (!(ambient_dc >= 0)) throw std::invalid_argument("noise: ambient DC must be >= 0");
  }
};

using Luminaire = LuminaireT<double>;
using GainProfile = GainProfileT<double>;
using Photodiode = PhotodiodeT<double>;
using ChannelGeometry = ChannelGeometryT<double>;
using NoiseModel = NoiseModelT<double>;

/// Lambertian emission pattern R_t(psi) = (m+1)/(2 pi) cos^m(psi), zero
/// outside the forward hemisphere.
template <typename Scalar>
Scalar lambertian_radiant_intensity(Scalar psi, Scalar m) {
  using std::cos;
  using std::isfinite;
  using std::pow;
  if (!(m >= 1)) throw std::invalid_argument("Lambertian order must be >= 1");
  if (!isfinite(psi)) throw std::invalid_argument("irradiance angle must be finite");
  using std::abs;
  if (abs(psi) >= std::numbers::pi_v<Scalar> / 2) return Scalar(0);
  return (m + 1) / (2 * std::numbers::pi_v<Scalar>)*pow(cos(psi), m);
}

/// DC channel gain H(0). Exactly zero outside the receiver field of view and
/// for light arriving on the back of the sensor.
template <typename Scalar>
Scalar channel_gain(const ChannelGeometryT<Scalar>& geometry, const PhotodiodeT<Scalar>& pd, Scalar m) {
  using std::cos;
  if (!(geometry.distance > 0)) throw std::invalid_argument("channel_gain: distance must be > 0");
  const Scalar theta = geometry.incidence_angle;
  if (theta > pd.fov_half_angle) return Scalar(0);
  const Scalar cos_theta = cos(theta);
  if (cos_theta <= 0) return Scalar(0);
  return lambertian_radiant_intensity(geometry.irradiance_angle, m) * pd.area * cos_theta /
         (geometry.distance * geometry.distance);
}

/// Photodiode facing direction, pointing down at the floor beacons. Pitch
/// tilts the normal away from vertical and roll sets the azimuth of that
/// tilt, the convention the solver's incidence-angle formula inverts. Yaw
/// does not enter.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> receiver_normal(const PoseT<Scalar>& rx) {
  using std::cos;
  using std::sin;
  return -Eigen::Matrix<Scalar, 3, 1>(cos(rx.roll) * sin(rx.pitch), sin(rx.roll) * sin(rx.pitch), cos(rx.pitch));
}

/// Geometry of the link from `tx` to a receiver at `rx`.
template <typename Scalar>
ChannelGeometryT<Scalar> link_geometry(const LuminaireT<Scalar>& tx, const PoseT<Scalar>& rx) {
  using std::acos;
  const Eigen::Matrix<Scalar, 3, 1> ray = rx.position - tx.position;
  const Scalar d = ray.norm();
  if (!(d > 0)) throw std::invalid_argument("link_geometry: receiver and transmitter are co-located");
  ChannelGeometryT<Scalar> g;
  g.distance = d;
  g.irradiance_angle = acos(std::clamp(tx.normal.dot(ray) / d, Scalar(-1), Scalar(1)));
  g.incidence_angle = acos(std::clamp(receiver_normal(rx).dot(-ray) / d, Scalar(-1), Scalar(1)));
  return g;
}

/// Noise-free received optical power P_t * H(0) * g_r(theta).
template <typename Scalar>
Scalar line_of_sight_power(const LuminaireT<Scalar>& tx, const PoseT<Scalar>& rx, const PhotodiodeT<Scalar>& pd) {
  const auto g = link_geometry(tx, rx);
  return tx.transmit_power * channel_gain(g, pd, tx.lambertian_order) * pd.gain(g.incidence_angle);
}

/// Received power with receiver noise: P_r = P_t H(0) g_r(theta) + N.
/// N is one Gaussian draw seeded by `seed` plus the ambient DC level.
template <typename Scalar>
Scalar received_power(const LuminaireT<Scalar>& tx, const PoseT<Scalar>& rx, const PhotodiodeT<Scalar>& pd,
                      const NoiseModelT<Scalar>& noise, std::uint64_t seed) {
  Scalar p = line_of_sight_power(tx, rx, pd) + noise.ambient_dc;
  if (noise.gaussian_sigma > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<Scalar> gauss(Scalar(0), noise.gaussian_sigma);
    p += gauss(rng);
  }
  return p;
}

}  // namespace vlp
