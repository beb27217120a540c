#include "vlp/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "vlp/errors.hpp"
#include "vlp/localization.hpp"

namespace vlp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Luminaires whose beacon was heard in this frame.
struct HeardAnchors {
  std::vector<const Luminaire*> tx;
  std::vector<double> rss;
  std::vector<Eigen::Vector2d> xy;

  HeardAnchors(const SensorFrame& frame, const Testbed& testbed) {
    if (frame.rss.size() != testbed.luminaires.size())
      throw std::invalid_argument("frame RSS count does not match the testbed luminaires");
    for (std::size_t i = 0; i < frame.rss.size(); ++i) {
      if (!(frame.rss[i] > testbed.rss_floor) || !(frame.rss[i] > 0)) continue;
      tx.push_back(&testbed.luminaires[i]);
      rss.push_back(frame.rss[i]);
      xy.push_back(testbed.luminaires[i].position.head<2>());
    }
  }

  std::size_t size() const { return tx.size(); }
};

class IndirectHProblem {
 public:
  IndirectHProblem(const SensorFrame& frame, const Testbed& testbed)
      : anchors_(frame, testbed), area_(testbed.photodiode.area) {
    if (anchors_.size() < 3) throw GeometryError("indirect-H: fewer than 3 beacons above the RSS floor");
    dist_.resize(anchors_.size());
    sep_.resize(anchors_.size());
  }

  double cost(double h, Eigen::Vector2d* xy_out) {
    ++evaluations_;
    const std::size_t n = anchors_.size();
    for (std::size_t i = 0; i < n; ++i) {
      sep_[i] = h - anchors_.tx[i]->position.z();
      if (!(sep_[i] > 0)) return kInf;
      const auto& tx = *anchors_.tx[i];
      dist_[i] = distance_parallel(anchors_.rss[i], tx.transmit_power, area_, tx.lambertian_order, sep_[i]);
    }
    Eigen::Vector2d xy;
    try {
      xy = trilaterate_2d<double>(anchors_.xy, dist_, sep_).position;
    } catch (const GeometryError&) {
      return kInf;
    }
    double c = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double implied = std::hypot(xy.x() - anchors_.xy[i].x(), xy.y() - anchors_.xy[i].y(), sep_[i]);
      c += (implied - dist_[i]) * (implied - dist_[i]);
    }
    if (xy_out) *xy_out = xy;
    return c;
  }

  std::size_t evaluations() const { return evaluations_; }
  int anchors() const { return static_cast<int>(anchors_.size()); }

 private:
  HeardAnchors anchors_;
  double area_;
  std::vector<double> dist_;
  std::vector<double> sep_;
  std::size_t evaluations_ = 0;
};

}  // namespace

std::string_view method_tag(Method m) {
  switch (m) {
    case Method::firefly:
      return "firefly";
    case Method::indirect_h:
      return "indirect_h";
    case Method::pso_3d:
      return "pso_3d";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "firefly") return Method::firefly;
  if (name == "indirect_h" || name == "indirect-h") return Method::indirect_h;
  if (name == "pso_3d" || name == "pso-3d") return Method::pso_3d;
  return std::nullopt;
}

void IndirectHConfig::validate() const {
  if (!(resolution > 0)) throw ConfigError("indirect-H: resolution must be > 0");
  if (!(height_max > height_min)) throw ConfigError("indirect-H: height range is empty");
}

std::size_t IndirectHConfig::sweep_size() const {
  return static_cast<std::size_t>(std::floor((height_max - height_min) / resolution + 1e-9)) + 1;
}

void PsoConfig::validate() const {
  if (swarm_size < 2) throw ConfigError("pso: swarm size must be >= 2");
  if (iterations < 1) throw ConfigError("pso: iterations must be >= 1");
  if (!((bounds.max() - bounds.min()).array() > 0).all()) throw ConfigError("pso: degenerate search bounds");
}

FireflyResult solve_firefly(const SensorFrame& frame, double z, const Testbed& testbed) {
  const HeardAnchors heard(frame, testbed);
  const double area = testbed.photodiode.area;

  std::vector<Eigen::Vector2d> xy;
  std::vector<double> d_par, sep, rss;
  std::vector<const Luminaire*> used;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i < heard.size(); ++i) {
    const Luminaire& tx = *heard.tx[i];
    const double h = z - tx.position.z();
    if (!(h > 0)) continue;
    ++evaluations;
    d_par.push_back(distance_parallel(heard.rss[i], tx.transmit_power, area, tx.lambertian_order, h));
    sep.push_back(h);
    xy.push_back(heard.xy[i]);
    rss.push_back(heard.rss[i]);
    used.push_back(&tx);
  }
  if (used.size() < 3) throw GeometryError("firefly: fewer than 3 usable beacons");

  FireflyResult out;
  out.first_pass = trilaterate_2d<double>(xy, d_par, sep).position;
  ++evaluations;

  Pose provisional;
  provisional.position = {out.first_pass.x(), out.first_pass.y(), z};
  provisional.roll = frame.roll;
  provisional.pitch = frame.pitch;
  provisional.yaw = frame.yaw;

  std::vector<Eigen::Vector2d> xy2;
  std::vector<double> d_tilt, sep2;
  for (std::size_t i = 0; i < used.size(); ++i) {
    const Luminaire& tx = *used[i];
    const double theta = incidence_angle(provisional, tx.position, d_par[i]);
    if (theta > testbed.photodiode.fov_half_angle) continue;
    ++evaluations;
    try {
      d_tilt.push_back(distance_tilted_at_height(rss[i], tx, sep[i], theta, area));
    } catch (const GeometryError&) {
      continue;
    }
    xy2.push_back(xy[i]);
    sep2.push_back(sep[i]);
  }
  if (xy2.size() < 3) throw GeometryError("firefly: fewer than 3 beacons inside the tilted receiver cone");
  const Eigen::Vector2d final_xy = trilaterate_2d<double>(xy2, d_tilt, sep2).position;
  ++evaluations;

  auto& est = out.estimate;
  est.timestamp = frame.timestamp;
  est.method = Method::firefly;
  est.position = {final_xy.x(), final_xy.y(), z};
  est.evaluations = evaluations;
  est.anchors_used = static_cast<int>(xy2.size());
  for (std::size_t i = 0; i < xy2.size(); ++i) {
    const double r = std::hypot(final_xy.x() - xy2[i].x(), final_xy.y() - xy2[i].y(), sep2[i]) - d_tilt[i];
    est.residual += r * r;
  }
  return out;
}

FireflyResult solve_firefly(const SensorFrame& frame, const HeightEstimate& height, const Testbed& testbed) {
  return solve_firefly(frame, height.h_fused, testbed);
}

double indirect_h_cost(const SensorFrame& frame, double height, const Testbed& testbed, Eigen::Vector2d* xy) {
  IndirectHProblem problem(frame, testbed);
  return problem.cost(height, xy);
}

PositionEstimate solve_indirect_h(const SensorFrame& frame, const IndirectHConfig& cfg, const Testbed& testbed) {
  cfg.validate();
  IndirectHProblem problem(frame, testbed);

  double best_h = cfg.height_min;
  double best_cost = kInf;
  if (!cfg.fast_search) {
    const std::size_t n = cfg.sweep_size();
    for (std::size_t k = 0; k < n; ++k) {
      const double h = cfg.height_min + static_cast<double>(k) * cfg.resolution;
      const double c = problem.cost(h, nullptr);
      if (c < best_cost) {
        best_cost = c;
        best_h = h;
      }
    }
  } else {
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = cfg.height_min;
    double b = cfg.height_max;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = problem.cost(c, nullptr);
    double fd = problem.cost(d, nullptr);
    while (b - a > cfg.resolution) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = problem.cost(c, nullptr);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = problem.cost(d, nullptr);
      }
    }
    best_h = (a + b) / 2;
  }

  Eigen::Vector2d xy;
  const double residual = problem.cost(best_h, &xy);
  if (!std::isfinite(residual)) throw GeometryError("indirect-H: no feasible candidate height");

  PositionEstimate est;
  est.timestamp = frame.timestamp;
  est.method = Method::indirect_h;
  est.position = {xy.x(), xy.y(), best_h};
  est.residual = residual;
  // the final re-evaluation only recovers the stored fix
  est.evaluations = problem.evaluations() - (cfg.fast_search ? 0 : 1);
  est.anchors_used = problem.anchors();
  return est;
}

double parallel_model_power(const Luminaire& tx, const Photodiode& pd, const Eigen::Vector3d& position) {
  const Eigen::Vector3d ray = position - tx.position;
  const double h = ray.z();
  if (!(h > 0)) return 0;
  const double d2 = ray.squaredNorm();
  const double m = tx.lambertian_order;
  return tx.transmit_power * (m + 1) / (2 * std::numbers::pi) * pd.area * std::pow(h / std::sqrt(d2), m + 1) / d2;
}

PositionEstimate solve_pso_3d(const SensorFrame& frame, const PsoConfig& cfg, const Testbed& testbed,
                              std::uint64_t seed) {
  cfg.validate();
  if (frame.rss.size() != testbed.luminaires.size())
    throw std::invalid_argument("frame RSS count does not match the testbed luminaires");
  if (frame.rss.size() < 3) throw GeometryError("pso: at least 3 anchors required");

  const auto cost = [&](const Eigen::Vector3d& p) {
    double c = 0;
    for (std::size_t i = 0; i < frame.rss.size(); ++i) {
      const double r = parallel_model_power(testbed.luminaires[i], testbed.photodiode, p) - frame.rss[i];
      c += r * r;
    }
    return c;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Vector3d lo = cfg.bounds.min();
  const Eigen::Vector3d span = cfg.bounds.max() - lo;
  const Eigen::Vector3d vmax = 0.5 * span;
  const auto n = static_cast<std::size_t>(cfg.swarm_size);

  std::vector<Eigen::Vector3d> x(n), v(n, Eigen::Vector3d::Zero()), best_x(n);
  std::vector<double> best_f(n);
  std::size_t evaluations = 0;
  std::size_t g = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) x[i][k] = lo[k] + unit(rng) * span[k];
    best_x[i] = x[i];
    best_f[i] = cost(x[i]);
    ++evaluations;
    if (best_f[i] < best_f[g]) g = i;
  }

  for (int it = 1; it < cfg.iterations; ++it) {
    const Eigen::Vector3d global = best_x[g];
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < 3; ++k) {
        const double r1 = unit(rng);
        const double r2 = unit(rng);
        double vk = cfg.inertia * v[i][k] + cfg.cognitive * r1 * (best_x[i][k] - x[i][k]) +
                    cfg.social * r2 * (global[k] - x[i][k]);
        vk = std::clamp(vk, -vmax[k], vmax[k]);
        v[i][k] = vk;
        x[i][k] = std::clamp(x[i][k] + vk, lo[k], lo[k] + span[k]);
      }
      const double f = cost(x[i]);
      ++evaluations;
      if (f < best_f[i]) {
        best_f[i] = f;
        best_x[i] = x[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (best_f[i] < best_f[g]) g = i;
  }

  PositionEstimate est;
  est.timestamp = frame.timestamp;
  est.method = Method::pso_3d;
  est.position = best_x[g];
  est.residual = best_f[g];
  est.evaluations = evaluations;
  est.anchors_used = static_cast<int>(frame.rss.size());
  return est;
}

}  // namespace vlp
