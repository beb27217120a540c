#include "vlp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "vlp/rng.hpp"

namespace vlp {

ErrorStats error_stats(std::span<const double> errors) {
  if (errors.empty()) throw std::invalid_argument("error_stats: empty sample");
  ErrorStats s;
  s.n = errors.size();
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0;
  for (double e : sorted) sum += e;
  s.mean = sum / static_cast<double>(s.n);
  const std::size_t mid = s.n / 2;
  s.median = s.n % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
  s.max = sorted.back();
  double ss = 0;
  for (double e : sorted) ss += (e - s.mean) * (e - s.mean);
  s.std_dev = std::sqrt(ss / static_cast<double>(s.n));
  return s;
}

std::vector<double> position_errors(std::span<const PositionEstimate> estimates, std::span<const Pose> truth) {
  if (estimates.size() != truth.size()) throw std::invalid_argument("position_errors: stream lengths differ");
  std::vector<double> out(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (std::abs(estimates[i].timestamp - truth[i].timestamp) > 1e-6)
      throw std::invalid_argument("position_errors: timestamp misalignment at index " + std::to_string(i));
    out[i] = (estimates[i].position - truth[i].position).norm();
  }
  return out;
}

double improvement_percent(double candidate, double baseline) { return 100.0 * (1.0 - candidate / baseline); }

MethodRun run_method(const FlightLog& log, Method method, const Testbed& testbed, const SolverSettings& settings,
                     std::uint64_t log_index) {
  MethodRun run;
  run.method = method;
  run.frames = log.frames.size();

  std::optional<HeightEstimator> height;
  std::size_t vlp_evaluations = 0;
  if (method == Method::firefly) {
    height.emplace(settings.height, [&](const SensorFrame& f) -> std::optional<double> {
      const auto est = solve_indirect_h(f, settings.drift_vlp, testbed);
      vlp_evaluations += est.evaluations;
      return est.position.z();
    });
  }

  for (std::size_t k = 0; k < log.frames.size(); ++k) {
    const SensorFrame& frame = log.frames[k];
    try {
      PositionEstimate est;
      switch (method) {
        case Method::firefly: {
          const HeightEstimate h = height->update(frame);
          run.heights.push_back(h);
          est = solve_firefly(frame, h, testbed).estimate;
          break;
        }
        case Method::indirect_h:
          est = solve_indirect_h(frame, settings.indirect_h, testbed);
          break;
        case Method::pso_3d:
          est = solve_pso_3d(frame, settings.pso, testbed, derive_seed(settings.seed, log_index, k));
          break;
      }
      run.estimates.push_back(est);
      Pose truth = frame.ground_truth;
      truth.timestamp = frame.timestamp;
      run.truth.push_back(truth);
      run.frame_index.push_back(k);
    } catch (const std::exception&) {
      ++run.failures;
    }
  }
  run.height_evaluations = vlp_evaluations;
  return run;
}

const MethodReport* Comparison::find(Method m) const {
  for (const auto& r : reports)
    if (r.method == m) return &r;
  return nullptr;
}

std::optional<ErrorStats> Comparison::improvement(Method candidate, Method baseline) const {
  const auto* c = find(candidate);
  const auto* b = find(baseline);
  if (!c || !b || c->error.n == 0 || b->error.n == 0) return std::nullopt;
  ErrorStats s;
  s.mean = improvement_percent(c->error.mean, b->error.mean);
  s.median = improvement_percent(c->error.median, b->error.median);
  s.max = improvement_percent(c->error.max, b->error.max);
  s.std_dev = improvement_percent(c->error.std_dev, b->error.std_dev);
  s.n = std::min(c->error.n, b->error.n);
  return s;
}

Comparison compare_methods(std::span<const FlightLog> logs, std::span<const Method> methods, const Testbed& testbed,
                           const SolverSettings& settings) {
  if (logs.empty()) throw std::invalid_argument("compare_methods: no logs");
  std::vector<std::vector<MethodRun>> runs(methods.size());
  // solved[li][k]: number of methods with a fix for frame k of log li
  std::vector<std::vector<std::size_t>> solved(logs.size());
  for (std::size_t li = 0; li < logs.size(); ++li) solved[li].assign(logs[li].frames.size(), 0);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t li = 0; li < logs.size(); ++li) {
      runs[mi].push_back(run_method(logs[li], methods[mi], testbed, settings, li));
      for (std::size_t k : runs[mi].back().frame_index) ++solved[li][k];
    }
  }

  Comparison out;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodReport report;
    report.method = methods[mi];
    std::vector<double> errors, height_errors, common, common_height;
    for (std::size_t li = 0; li < logs.size(); ++li) {
      const auto& log = logs[li];
      const MethodRun& run = runs[mi][li];
      report.frames += run.frames;
      report.failures += run.failures;
      report.height_evaluations += run.height_evaluations;
      const bool truth = std::all_of(log.frames.begin(), log.frames.end(),
                                     [](const SensorFrame& f) { return f.has_ground_truth; });
      std::vector<double> e;
      if (truth) e = position_errors(run.estimates, run.truth);
      for (std::size_t i = 0; i < run.estimates.size(); ++i) {
        const auto& est = run.estimates[i];
        report.total_evaluations += est.evaluations;
        TraceRow row;
        row.log = log.name;
        row.t = est.timestamp;
        row.method = report.method;
        row.position = est.position;
        row.evaluations = est.evaluations;
        if (truth) {
          row.error = e[i];
          const double dz = std::abs(est.position.z() - run.truth[i].position.z());
          errors.push_back(e[i]);
          height_errors.push_back(dz);
          if (solved[li][run.frame_index[i]] == methods.size()) {
            common.push_back(e[i]);
            common_height.push_back(dz);
          }
        }
        out.traces.push_back(row);
      }
    }
    const std::size_t fixes = report.frames - report.failures;
    if (fixes > 0) report.evaluations_per_fix = static_cast<double>(report.total_evaluations) / static_cast<double>(fixes);
    if (!errors.empty()) {
      report.error = error_stats(errors);
      report.height_error = error_stats(height_errors);
    }
    if (!common.empty()) {
      report.common_error = error_stats(common);
      report.common_height_error = error_stats(common_height);
    }
    out.reports.push_back(report);
  }
  return out;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string format_comparison_table(const Comparison& c) {
  std::ostringstream os;
  const auto cell = [&](const std::string& s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%16s", s.c_str());
    os << buf;
  };
  const std::vector<std::pair<Method, Method>> pairs = [&] {
    std::vector<std::pair<Method, Method>> p;
    if (c.find(Method::firefly))
      for (const auto& r : c.reports)
        if (r.method != Method::firefly) p.emplace_back(Method::firefly, r.method);
    return p;
  }();

  os << "                   ";
  for (const auto& r : c.reports) cell(std::string(method_tag(r.method)));
  for (const auto& [a, b] : pairs) cell("vs " + std::string(method_tag(b)));
  os << '\n';

  const auto row = [&](const char* label, double ErrorStats::*field) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-19s", label);
    os << buf;
    for (const auto& r : c.reports) cell(r.error.n ? fmt("%.2f", 100 * (r.error.*field)) : "-");
    for (const auto& [a, b] : pairs) {
      const auto imp = c.improvement(a, b);
      cell(imp ? fmt("%.2f%%", (*imp).*field) : "-");
    }
    os << '\n';
  };
  row("Mean error (cm)", &ErrorStats::mean);
  row("Median error (cm)", &ErrorStats::median);
  row("Max. error (cm)", &ErrorStats::max);
  row("Std. dev. (cm)", &ErrorStats::std_dev);

  const auto simple = [&](const char* label, auto value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-19s", label);
    os << buf;
    for (const auto& r : c.reports) cell(value(r));
    os << '\n';
  };
  simple("Height MAE (cm)", [](const MethodReport& r) { return r.height_error.n ? fmt("%.2f", 100 * r.height_error.mean) : "-"; });
  simple("Mean, common (cm)", [](const MethodReport& r) { return r.common_error.n ? fmt("%.2f", 100 * r.common_error.mean) : "-"; });
  simple("Common frames", [](const MethodReport& r) { return std::to_string(r.common_error.n); });
  simple("Evals per fix", [](const MethodReport& r) { return fmt("%.1f", r.evaluations_per_fix); });
  simple("Failed frames", [](const MethodReport& r) {
    return std::to_string(r.failures) + "/" + std::to_string(r.frames);
  });
  return os.str();
}

std::string format_comparison_csv(const Comparison& c) {
  std::ostringstream os;
  os << "method,n,frames,failures,mean,median,max,std,height_mae,common_n,common_mean,common_height_mae,"
        "evals_per_fix,total_evals,height_evals,impr_mean,impr_median,impr_max,impr_std\n";
  for (const auto& r : c.reports) {
    os << method_tag(r.method) << ',' << r.error.n << ',' << r.frames << ',' << r.failures << ','
       << fmt("%.6f", r.error.mean) << ',' << fmt("%.6f", r.error.median) << ',' << fmt("%.6f", r.error.max) << ','
       << fmt("%.6f", r.error.std_dev) << ',' << fmt("%.6f", r.height_error.mean) << ',' << r.common_error.n << ','
       << fmt("%.6f", r.common_error.mean) << ',' << fmt("%.6f", r.common_height_error.mean) << ','
       << fmt("%.3f", r.evaluations_per_fix) << ',' << r.total_evaluations << ',' << r.height_evaluations;
    const auto imp = r.method == Method::firefly ? std::nullopt : c.improvement(Method::firefly, r.method);
    if (imp)
      os << ',' << fmt("%.4f", imp->mean) << ',' << fmt("%.4f", imp->median) << ',' << fmt("%.4f", imp->max) << ','
         << fmt("%.4f", imp->std_dev);
    else
      os << ",,,,";
    os << '\n';
  }
  return os.str();
}

}  // namespace vlp
