#pragma once

// Error statistics and the method comparison harness.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vlp/fusion.hpp"
#include "vlp/sim.hpp"
#include "vlp/solvers.hpp"

namespace vlp {

struct ErrorStats {
  double mean = 0;
  double median = 0;
  double max = 0;
  double std_dev = 0;  // population standard deviation
  std::size_t n = 0;
};

/// Throws std::invalid_argument on an empty sample.
ErrorStats error_stats(std::span<const double> errors);

/// Euclidean 3D error per frame; estimates and truth are matched by index and
/// must share timestamps (within 1 us).
std::vector<double> position_errors(std::span<const PositionEstimate> estimates, std::span<const Pose> truth);

/// Relative error reduction in percent: 100 * (1 - candidate / baseline).
double improvement_percent(double candidate, double baseline);

struct SolverSettings {
  IndirectHConfig indirect_h;
  // Height source for the barometer drift correction.
  IndirectHConfig drift_vlp = [] {
    IndirectHConfig c;
    c.fast_search = true;
    return c;
  }();
  PsoConfig pso;
  HeightEstimatorConfig height;
  std::uint64_t seed = 1;
};

/// Runs one solver over a whole log. Frames where the solver throws are
/// skipped and counted in `failures`. Firefly runs its height estimator
/// across the log in order.
struct MethodRun {
  Method method = Method::firefly;
  std::vector<PositionEstimate> estimates;
  std::vector<Pose> truth;  // aligned with estimates
  std::vector<std::size_t> frame_index;  // log frame of each estimate
  std::vector<HeightEstimate> heights;  // firefly only, one per frame
  std::size_t frames = 0;
  std::size_t failures = 0;
  std::size_t height_evaluations = 0;  // indirect-H work spent on drift correction
};

MethodRun run_method(const FlightLog& log, Method method, const Testbed& testbed, const SolverSettings& settings,
                     std::uint64_t log_index = 0);

/// `error` and `height_error` cover every fix the method produced.
/// The common_* fields restrict both to frames that all compared methods
/// solved, which removes the bias from each method picking its own frames.
struct MethodReport {
  Method method = Method::firefly;
  ErrorStats error;
  ErrorStats height_error;  // |z_est - z_true|
  ErrorStats common_error;
  ErrorStats common_height_error;
  std::size_t frames = 0;
  std::size_t failures = 0;
  double evaluations_per_fix = 0;
  std::size_t total_evaluations = 0;
  std::size_t height_evaluations = 0;

  double failure_rate() const { return frames ? static_cast<double>(failures) / static_cast<double>(frames) : 0.0; }
};

struct TraceRow {
  std::string log;
  double t = 0;
  Method method = Method::firefly;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  std::optional<double> error;
  std::size_t evaluations = 0;
};

struct Comparison {
  std::vector<MethodReport> reports;
  std::vector<TraceRow> traces;

  const MethodReport* find(Method m) const;
  /// Improvement of `candidate` over `baseline` for mean/median/max/std.
  std::optional<ErrorStats> improvement(Method candidate, Method baseline) const;
};

Comparison compare_methods(std::span<const FlightLog> logs, std::span<const Method> methods, const Testbed& testbed,
                           const SolverSettings& settings);

/// Table of statistics (cm), improvements and evaluation counts.
std::string format_comparison_table(const Comparison& c);
std::string format_comparison_csv(const Comparison& c);

}  // namespace vlp
