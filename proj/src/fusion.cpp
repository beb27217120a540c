#include "vlp/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "vlp/errors.hpp"

namespace vlp {

void ComplementaryFilterConfig::validate() const {
  if (!(gain > 0)) throw ConfigError("complementary filter: gain must be > 0");
  if (!(damping > 0)) throw ConfigError("complementary filter: damping must be > 0");
  if (!(dt > 0)) throw ConfigError("complementary filter: dt must be > 0");
}

void DriftCorrectionConfig::validate() const {
  if (!(epsilon >= 0 && epsilon <= 1)) throw ConfigError("drift correction: epsilon must be in [0, 1]");
  if (!(tilt_threshold > 0)) throw ConfigError("drift correction: tilt threshold must be > 0");
  if (stride_k < 1) throw ConfigError("drift correction: stride k must be >= 1");
}

ComplementaryState complementary_update(const ComplementaryState& state, double baro_height, double vertical_accel,
                                        const ComplementaryFilterConfig& cfg) {
  const double t = cfg.dt;
  const double k1 = 2 * cfg.damping * cfg.gain;
  const double k2 = cfg.gain * cfg.gain;
  const double dz = baro_height - state.height;
  const double dv = vertical_accel * t;
  ComplementaryState next;
  next.height = state.height + t * state.velocity + t * (k1 + k2 * t / 2) * dz + t / 2 * dv;
  next.velocity = state.velocity + t * k2 * dz + dv;
  return next;
}

bool drift_gate_open(double roll, double pitch, std::size_t update_index, const DriftCorrectionConfig& cfg) {
  return std::abs(roll) < cfg.tilt_threshold && std::abs(pitch) < cfg.tilt_threshold &&
         update_index % static_cast<std::size_t>(cfg.stride_k) == 0;
}

double drift_correct(std::optional<double> h_vlp, double delta_baro, double prev_h_bar, double roll, double pitch,
                     std::size_t update_index, const DriftCorrectionConfig& cfg) {
  const double propagated = prev_h_bar + delta_baro;
  if (!h_vlp || !drift_gate_open(roll, pitch, update_index, cfg)) return propagated;
  return cfg.epsilon * *h_vlp + (1 - cfg.epsilon) * propagated;
}

HeightEstimator::HeightEstimator(HeightEstimatorConfig cfg, VlpHeightSource vlp)
    : cfg_(std::move(cfg)), vlp_(std::move(vlp)) {
  cfg_.filter.validate();
  cfg_.drift.validate();
  if (!(cfg_.ceiling > 0)) throw ConfigError("height estimator: ceiling must be > 0");
}

HeightEstimate HeightEstimator::update(const SensorFrame& frame) {
  HeightEstimate out;
  out.timestamp = frame.timestamp;
  if (index_ == 0) {
    h_bar_ = frame.baro_altitude;
    filter_ = {frame.baro_altitude, 0.0};
  } else {
    out.delta_baro = frame.baro_altitude - prev_baro_;
    if (cfg_.drift_correction && vlp_ && drift_gate_open(frame.roll, frame.pitch, index_, cfg_.drift)) {
      ++vlp_queries_;
      try {
        out.h_vlp = vlp_(frame);
      } catch (const std::exception&) {
        out.h_vlp.reset();
      }
    }
    h_bar_ = drift_correct(out.h_vlp, out.delta_baro, h_bar_, frame.roll, frame.pitch, index_, cfg_.drift);
    ComplementaryFilterConfig step = cfg_.filter;
    const double dt = frame.timestamp - prev_time_;
    if (dt > 0) step.dt = dt;
    filter_ = complementary_update(filter_, h_bar_, frame.accel.z() * kGravity, step);
  }
  prev_baro_ = frame.baro_altitude;
  prev_time_ = frame.timestamp;
  ++index_;
  out.h_bar_corrected = h_bar_;
  out.h_fused = std::clamp(filter_.height, 0.0, cfg_.ceiling);
  return out;
}

std::vector<HeightEstimate> estimate_height(std::span<const SensorFrame> frames, const VlpHeightSource& vlp,
                                            const HeightEstimatorConfig& cfg) {
  HeightEstimator est(cfg, vlp);
  std::vector<HeightEstimate> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(est.update(f));
  return out;
}

}  // namespace vlp
