// vlp: simulate flights, localize logs, compare solvers.
//
// Exit codes: 0 ok, 2 usage/config/validation/IO, 3 malformed log data,
// 4 solver failed on every frame.

#include <glob.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlp/config.hpp"
#include "vlp/errors.hpp"
#include "vlp/eval.hpp"
#include "vlp/io.hpp"
#include "vlp/rng.hpp"
#include "vlp/solvers.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace vlp;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUsage = 2, kData = 3, kSolver = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// write to a sibling temp file, then rename over the target
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

RunConfig config_from(const std::string& path) { return path.empty() ? RunConfig{} : load_config(path); }

json config_record(const std::string& path, const RunConfig& cfg) {
  return {{"path", path}, {"text", cfg.source_text}, {"fnv1a64", hex64(fnv1a64(cfg.source_text))}};
}

void apply_drift_overrides(RunConfig& cfg, const CLI::Option* eps_opt, double eps, const CLI::Option* k_opt, int k) {
  if (*eps_opt) cfg.solvers.height.drift.epsilon = eps;
  if (*k_opt) cfg.solvers.height.drift.stride_k = k;
  try {
    cfg.solvers.height.drift.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

std::vector<SensorFrame> read_log_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open log '" + path.string() + "'");
  try {
    return read_sensor_log(in);
  } catch (const ParseError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<fs::path> expand(const std::vector<std::string>& patterns) {
  std::vector<fs::path> out;
  for (const auto& p : patterns) {
    glob_t g{};
    if (::glob(p.c_str(), 0, nullptr, &g) == 0)
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    ::globfree(&g);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Method method_or_throw(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "' (firefly, indirect-h, pso-3d)");
  return *m;
}

// ---- simulate ----

struct SimulateArgs {
  std::string config, flight = "circle", out, from_manifest;
  std::uint64_t seed = 1;
};

int simulate(SimulateArgs a) {
  RunConfig cfg;
  if (!a.from_manifest.empty()) {
    std::ifstream in(a.from_manifest);
    if (!in) throw UsageError("cannot open manifest '" + a.from_manifest + "'");
    json m;
    try {
      m = json::parse(in);
      a.seed = m.at("seed").get<std::uint64_t>();
      a.flight = m.at("flight").get<std::string>();
      a.config = m.at("config").at("path").get<std::string>();
      const auto text = m.at("config").at("text").get<std::string>();
      cfg = text.empty() ? RunConfig{} : parse_config(text, a.config);
    } catch (const json::exception& e) {
      throw UsageError("bad manifest: " + std::string(e.what()));
    }
  } else {
    cfg = config_from(a.config);
  }

  const auto plans = cfg.flight_set(a.flight);
  json logs = json::array();
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const std::uint64_t seed = plans.size() == 1 ? a.seed : derive_seed(a.seed, 0x5eed, i);
    const FlightLog log = run_flight(cfg.testbed, plans[i], cfg.sensors, seed);
    std::ostringstream csv;
    write_sensor_log(csv, log.frames);
    const std::string file = log.name + ".csv";
    write_atomic(fs::path(a.out) / file, csv.str());
    logs.push_back({{"flight", log.name}, {"file", file}, {"seed", seed}, {"frames", log.frames.size()}});
    std::cout << "wrote " << (fs::path(a.out) / file).string() << " (" << log.frames.size() << " frames)\n";
  }
  const json manifest = {{"tool", "vlp"},        {"version", kVersion}, {"command", "simulate"},
                         {"seed", a.seed},        {"flight", a.flight},  {"config", config_record(a.config, cfg)},
                         {"logs", logs}};
  write_atomic(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");
  return kOk;
}

// ---- localize ----

struct LocalizeArgs {
  std::string method, log, config, out, heights;
  std::uint64_t seed = 1;
  double epsilon = 0;
  int stride_k = 1;
};

int localize(const LocalizeArgs& a, const CLI::Option* eps_opt, const CLI::Option* k_opt) {
  const Method method = method_or_throw(a.method);
  RunConfig cfg = config_from(a.config);
  apply_drift_overrides(cfg, eps_opt, a.epsilon, k_opt, a.stride_k);
  cfg.solvers.seed = a.seed;

  FlightLog log;
  log.name = fs::path(a.log).stem().string();
  log.frames = read_log_file(a.log);
  if (log.frames.empty()) throw DataError(a.log + ": log has no frames");

  const std::vector<FlightLog> logs{log};
  const std::vector<Method> methods{method};
  const Comparison c = compare_methods(logs, methods, cfg.testbed, cfg.solvers);
  const auto& r = c.reports.front();
  if (r.failures == r.frames) throw SolverFailure(std::string(method_tag(method)) + " failed on every frame");

  std::ostringstream trace;
  write_estimate_trace(trace, c.traces);
  if (a.out.empty())
    std::cout << trace.str();
  else
    write_atomic(a.out, trace.str());

  if (!a.heights.empty()) {
    if (method != Method::firefly) throw UsageError("--heights needs --method firefly");
    const MethodRun run = run_method(log, method, cfg.testbed, cfg.solvers);
    std::ostringstream h;
    write_height_trace(h, run.heights, log.frames);
    write_atomic(a.heights, h.str());
  }

  std::cerr << method_tag(method) << ": " << (r.frames - r.failures) << "/" << r.frames << " frames solved";
  if (r.error.n) std::cerr << ", mean error " << 100 * r.error.mean << " cm";
  std::cerr << '\n';

  if (!a.out.empty()) {
    const json manifest = {{"tool", "vlp"},
                           {"version", kVersion},
                           {"command", "localize"},
                           {"method", std::string(method_tag(method))},
                           {"log", a.log},
                           {"seed", a.seed},
                           {"epsilon", cfg.solvers.height.drift.epsilon},
                           {"stride_k", cfg.solvers.height.drift.stride_k},
                           {"config", config_record(a.config, cfg)}};
    write_atomic(a.out + ".manifest.json", manifest.dump(2) + "\n");
  }
  return kOk;
}

// ---- compare ----

struct CompareArgs {
  std::vector<std::string> logs;
  std::string methods = "firefly,indirect-h,pso-3d", config, out;
  std::uint64_t seed = 1;
  double epsilon = 0;
  int stride_k = 1;
};

int compare(const CompareArgs& a, const CLI::Option* eps_opt, const CLI::Option* k_opt) {
  std::vector<Method> methods;
  std::stringstream list(a.methods);
  for (std::string name; std::getline(list, name, ',');)
    if (!name.empty()) methods.push_back(method_or_throw(name));
  if (methods.empty()) throw UsageError("no methods given");

  const auto paths = expand(a.logs);
  if (paths.empty()) throw UsageError("no log files match the given pattern");

  RunConfig cfg = config_from(a.config);
  apply_drift_overrides(cfg, eps_opt, a.epsilon, k_opt, a.stride_k);
  cfg.solvers.seed = a.seed;

  std::vector<FlightLog> logs;
  for (const auto& p : paths) {
    FlightLog log;
    log.name = p.stem().string();
    log.frames = read_log_file(p);
    logs.push_back(std::move(log));
  }

  const Comparison c = compare_methods(logs, methods, cfg.testbed, cfg.solvers);
  const std::string table = format_comparison_table(c);
  std::cout << table;
  for (const auto& r : c.reports)
    if (r.failures == r.frames) throw SolverFailure(std::string(method_tag(r.method)) + " failed on every frame");

  if (!a.out.empty()) {
    const fs::path out(a.out);
    write_atomic(out / "comparison.txt", table);
    write_atomic(out / "comparison.csv", format_comparison_csv(c));
    std::ostringstream trace;
    trace << "log,";
    write_estimate_trace(trace, {});
    for (const auto& row : c.traces) {
      std::ostringstream one;
      write_estimate_trace(one, std::vector{row});
      const std::string s = one.str();
      trace << row.log << ',' << s.substr(s.find('\n') + 1);
    }
    write_atomic(out / "traces.csv", trace.str());
    json files = json::array();
    for (const auto& p : paths) files.push_back(p.string());
    json tags = json::array();
    for (auto m : methods) tags.push_back(std::string(method_tag(m)));
    const json manifest = {{"tool", "vlp"},
                           {"version", kVersion},
                           {"command", "compare"},
                           {"logs", files},
                           {"methods", tags},
                           {"seed", a.seed},
                           {"epsilon", cfg.solvers.height.drift.epsilon},
                           {"stride_k", cfg.solvers.height.drift.stride_k},
                           {"config", config_record(a.config, cfg)}};
    write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visible-light drone positioning: simulation, localization and solver comparison"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Fly a plan through the simulated cell and write sensor logs");
  s->add_option("--config", sim.config, "TOML run configuration")->check(CLI::ExistingFile);
  s->add_option("--flight", sim.flight, "Plan name, or 'batch' for flight1..flight8")->capture_default_str();
  s->add_option("--seed", sim.seed, "Base RNG seed")->capture_default_str();
  s->add_option("--out", sim.out, "Output directory")->required();
  s->add_option("--from-manifest", sim.from_manifest, "Re-run the simulation recorded in a manifest")
      ->check(CLI::ExistingFile)
      ->excludes("--config");

  LocalizeArgs loc;
  auto* l = app.add_subcommand("localize", "Run one solver over a sensor log");
  l->add_option("--method", loc.method, "firefly | indirect-h | pso-3d")->required();
  l->add_option("--log", loc.log, "Sensor log CSV")->required();
  l->add_option("--config", loc.config, "TOML run configuration")->check(CLI::ExistingFile);
  l->add_option("--seed", loc.seed, "PSO seed")->capture_default_str();
  l->add_option("--out", loc.out, "Estimate trace CSV (stdout when omitted)");
  l->add_option("--heights", loc.heights, "Height trace CSV (firefly only)");
  auto* l_eps = l->add_option("--epsilon", loc.epsilon, "Drift correction blend factor");
  auto* l_k = l->add_option("--stride-k", loc.stride_k, "Run drift correction every k updates");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Compare solvers over a set of logs");
  c->add_option("--logs", cmp.logs, "Log files or glob patterns")->required();
  c->add_option("--methods", cmp.methods, "Comma-separated method list")->capture_default_str();
  c->add_option("--config", cmp.config, "TOML run configuration")->check(CLI::ExistingFile);
  c->add_option("--seed", cmp.seed, "PSO seed")->capture_default_str();
  c->add_option("--out", cmp.out, "Directory for table, CSV and traces");
  auto* c_eps = c->add_option("--epsilon", cmp.epsilon, "Drift correction blend factor");
  auto* c_k = c->add_option("--stride-k", cmp.stride_k, "Run drift correction every k updates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*s) return simulate(sim);
    if (*l) return localize(loc, l_eps, l_k);
    if (*c) return compare(cmp, c_eps, c_k);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
