#pragma once

// Declarative run configuration (TOML). Every section and key is optional;
// missing values fall back to the reference testbed and default solvers.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vlp/eval.hpp"
#include "vlp/sim.hpp"
#include "vlp/testbed.hpp"

namespace vlp {

struct RunConfig {
  Testbed testbed = Testbed::reference();
  SensorModels sensors = SensorModels::reference();
  SolverSettings solvers;
  std::map<std::string, FlightPlan> flights;  // overrides/extends the built-in plans
  std::string source_text;                    // verbatim config, empty for defaults

  /// Plan by name: configured plans first, then built-ins. "batch" is not a
  /// plan; see flight_set().
  FlightPlan flight(const std::string& name) const;
  /// `name`, or flight1..flight8 when name == "batch".
  std::vector<FlightPlan> flight_set(const std::string& name) const;
};

/// Throws ConfigError on syntax errors, unknown keys or invalid values.
RunConfig parse_config(std::string_view text, std::string_view source_name = "config");
RunConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a, used to fingerprint config files in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace vlp
