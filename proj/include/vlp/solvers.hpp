#pragma once

// Per-frame position solvers: the tilt-aware two-pass 2D+H pipeline and the
// two RSS-only baselines (height sweep and 3D particle swarm).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "vlp/fusion.hpp"
#include "vlp/sensors.hpp"
#include "vlp/testbed.hpp"

namespace vlp {

enum class Method { firefly, indirect_h, pso_3d };

std::string_view method_tag(Method m);
/// Accepts the CSV tags and their hyphenated CLI spellings.
std::optional<Method> parse_method(std::string_view name);

struct PositionEstimate {
  double timestamp = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Method method = Method::firefly;
  double residual = 0;
  std::size_t evaluations = 0;
  int anchors_used = 0;
};

struct IndirectHConfig {
  double height_min = 0.001;  // m
  double height_max = 2.0;    // m
  double resolution = 0.001;  // m
  bool fast_search = false;   // golden-section instead of a full sweep

  void validate() const;
  std::size_t sweep_size() const;
};

struct PsoConfig {
  int swarm_size = 200;
  int iterations = 20;
  Eigen::AlignedBox3d bounds{Eigen::Vector3d(0, 0, 0.001), Eigen::Vector3d(2, 2, 2)};
  double inertia = 0.72;
  double cognitive = 1.49;
  double social = 1.49;

  void validate() const;
};

struct FireflyResult {
  PositionEstimate estimate;
  Eigen::Vector2d first_pass = Eigen::Vector2d::Zero();  // parallel-assumption fix
};

/// Two-pass 2D trilateration at a known height `z`: parallel ranges first,
/// then tilt-corrected ranges using the provisional fix and IMU roll/pitch.
FireflyResult solve_firefly(const SensorFrame& frame, double z, const Testbed& testbed);
FireflyResult solve_firefly(const SensorFrame& frame, const HeightEstimate& height, const Testbed& testbed);

/// RSS-only height: trilaterate at each candidate height and keep the one
/// whose implied 3D ranges agree best with the RSS ranges.
PositionEstimate solve_indirect_h(const SensorFrame& frame, const IndirectHConfig& cfg, const Testbed& testbed);

/// Consistency cost of a candidate receiver height (inf when infeasible).
/// Optionally returns the trilaterated 2D position.
double indirect_h_cost(const SensorFrame& frame, double height, const Testbed& testbed,
                       Eigen::Vector2d* xy = nullptr);

/// Global-best PSO over (x, y, z) fitting the parallel-assumption RSS model.
PositionEstimate solve_pso_3d(const SensorFrame& frame, const PsoConfig& cfg, const Testbed& testbed,
                              std::uint64_t seed);

/// RSS predicted by the parallel model at `position` (what the PSO fits).
double parallel_model_power(const Luminaire& tx, const Photodiode& pd, const Eigen::Vector3d& position);

}  // namespace vlp
