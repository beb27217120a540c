#pragma once

// Direct height estimation: barometer + vertical acceleration through a
// second-order complementary filter, with the barometer's zero drift pulled
// back towards an RSS-derived height whenever the airframe is nearly level.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vlp/sensors.hpp"
#include "vlp/units.hpp"

namespace vlp {

struct ComplementaryFilterConfig {
  double gain = 1.0;     // k_f, crossover frequency [1/s]
  double damping = 1.0;  // zeta of the error dynamics
  double dt = 0.02;      // s

  void validate() const;
};

struct ComplementaryState {
  double height = 0;    // m
  double velocity = 0;  // m/s
};

/// One filter step. The barometer error is low-passed (gains 2*zeta*k_f and
/// k_f^2) while the acceleration is integrated at full bandwidth:
///   dz = baro - h,  dv = a * T
///   h' = h + T v + T (k1 + k2 T / 2) dz + (T / 2) dv
///   v' = v + T k2 dz + dv
ComplementaryState complementary_update(const ComplementaryState& state, double baro_height, double vertical_accel,
                                        const ComplementaryFilterConfig& cfg);

struct DriftCorrectionConfig {
  double epsilon = 0.002;
  double tilt_threshold = deg2rad(3.0);  // rad
  int stride_k = 1;

  void validate() const;
};

/// True when RSS height may be blended in at this update: level enough and on
/// a stride boundary.
bool drift_gate_open(double roll, double pitch, std::size_t update_index, const DriftCorrectionConfig& cfg);

/// Corrected barometric height. On an open gate with `h_vlp` present:
///   h_bar = eps * h_vlp + (1 - eps) * (prev_h_bar + delta_baro)
/// otherwise h_bar = prev_h_bar + delta_baro.
double drift_correct(std::optional<double> h_vlp, double delta_baro, double prev_h_bar, double roll, double pitch,
                     std::size_t update_index, const DriftCorrectionConfig& cfg);

struct HeightEstimate {
  double timestamp = 0;
  double h_fused = 0;
  std::optional<double> h_vlp;
  double h_bar_corrected = 0;
  double delta_baro = 0;
};

/// RSS-only height for one frame, or nullopt when it cannot be computed.
using VlpHeightSource = std::function<std::optional<double>(const SensorFrame&)>;

struct HeightEstimatorConfig {
  ComplementaryFilterConfig filter;
  DriftCorrectionConfig drift;
  bool drift_correction = true;
  double ceiling = 2.0;  // m, upper end of the flight envelope
};

/// Stateful per-flight estimator; feed frames in timestamp order.
class HeightEstimator {
 public:
  HeightEstimator(HeightEstimatorConfig cfg, VlpHeightSource vlp);

  HeightEstimate update(const SensorFrame& frame);

  std::size_t vlp_queries() const { return vlp_queries_; }

 private:
  HeightEstimatorConfig cfg_;
  VlpHeightSource vlp_;
  ComplementaryState filter_;
  double prev_baro_ = 0;
  double prev_time_ = 0;
  double h_bar_ = 0;
  std::size_t index_ = 0;
  std::size_t vlp_queries_ = 0;
};

std::vector<HeightEstimate> estimate_height(std::span<const SensorFrame> frames, const VlpHeightSource& vlp,
                                            const HeightEstimatorConfig& cfg);

}  // namespace vlp
