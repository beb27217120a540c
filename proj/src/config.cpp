#include "vlp/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "vlp/errors.hpp"
#include "vlp/units.hpp"

namespace vlp {
namespace {

using Keys = std::initializer_list<std::string_view>;

void check_keys(const toml::table& t, std::string_view where, Keys allowed) {
  for (const auto& [k, v] : t) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k.str() == a;
    if (!ok) throw ConfigError("unknown key '" + std::string(k.str()) + "' in [" + std::string(where) + "]");
  }
}

const toml::table* subtable(const toml::table& t, std::string_view key) {
  const auto* node = t.get(key);
  if (!node) return nullptr;
  if (!node->is_table()) throw ConfigError("'" + std::string(key) + "' must be a table");
  return node->as_table();
}

double number(const toml::table& t, std::string_view key, double fallback) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if (auto v = node->value<double>()) return *v;
  throw ConfigError("'" + std::string(key) + "' must be a number");
}

bool boolean(const toml::table& t, std::string_view key, bool fallback) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if (auto v = node->value_exact<bool>()) return *v;
  throw ConfigError("'" + std::string(key) + "' must be true or false");
}

long long integer(const toml::table& t, std::string_view key, long long fallback) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if (auto v = node->value_exact<int64_t>()) return *v;
  throw ConfigError("'" + std::string(key) + "' must be an integer");
}

std::string text(const toml::table& t, std::string_view key, std::string fallback) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if (auto v = node->value_exact<std::string>()) return *v;
  throw ConfigError("'" + std::string(key) + "' must be a string");
}

std::vector<double> numbers(const toml::node& node, std::string_view key) {
  const auto* arr = node.as_array();
  if (!arr) throw ConfigError("'" + std::string(key) + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : *arr) {
    auto v = e.value<double>();
    if (!v) throw ConfigError("'" + std::string(key) + "' must be an array of numbers");
    out.push_back(*v);
  }
  return out;
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const toml::table& t, std::string_view key, const Eigen::Matrix<double, N, 1>& fallback) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  const auto v = numbers(*node, key);
  if (v.size() != N) throw ConfigError("'" + std::string(key) + "' must have " + std::to_string(N) + " elements");
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

FlightKind parse_kind(const std::string& s) {
  if (s == "hover") return FlightKind::hover;
  if (s == "circle") return FlightKind::circle;
  if (s == "lift_land") return FlightKind::lift_land;
  if (s == "waypoints") return FlightKind::waypoints;
  if (s == "route") return FlightKind::route;
  throw ConfigError("unknown flight kind '" + s + "'");
}

FlightPlan parse_flight(const std::string& name, const toml::table& t) {
  check_keys(t, "flights." + name,
             {"kind", "radius", "center", "cruise_height", "height_min", "height_max", "height_swing", "speed",
              "clockwise", "duration", "max_tilt_deg", "frame_rate", "yaw_deg", "yaw_rate_deg", "waypoints", "base"});
  FlightPlan p;
  // `base` starts from a built-in plan, e.g. base = "flight3"
  if (t.contains("base")) {
    p = named_flight(text(t, "base", ""));
  } else if (t.contains("kind")) {
    p.kind = parse_kind(text(t, "kind", "circle"));
  } else {
    try {
      p = named_flight(name);
    } catch (const ConfigError&) {
    }
  }
  p.name = name;
  if (t.contains("kind")) p.kind = parse_kind(text(t, "kind", "circle"));
  p.radius = number(t, "radius", p.radius);
  p.center = vec<2>(t, "center", p.center);
  p.cruise_height = number(t, "cruise_height", p.cruise_height);
  p.height_min = number(t, "height_min", p.height_min);
  p.height_max = number(t, "height_max", p.height_max);
  p.height_swing = number(t, "height_swing", p.height_swing);
  p.speed = number(t, "speed", p.speed);
  p.clockwise = boolean(t, "clockwise", p.clockwise);
  p.duration = number(t, "duration", p.duration);
  p.max_tilt = deg2rad(number(t, "max_tilt_deg", rad2deg(p.max_tilt)));
  p.frame_rate = number(t, "frame_rate", p.frame_rate);
  p.yaw = deg2rad(number(t, "yaw_deg", rad2deg(p.yaw)));
  p.yaw_rate = deg2rad(number(t, "yaw_rate_deg", rad2deg(p.yaw_rate)));
  if (const auto* wp = t.get("waypoints")) {
    const auto* arr = wp->as_array();
    if (!arr) throw ConfigError("'waypoints' must be an array of [x, y, z]");
    p.waypoints.clear();
    for (const auto& e : *arr) {
      const auto v = numbers(e, "waypoints");
      if (v.size() != 3) throw ConfigError("each waypoint must be [x, y, z]");
      p.waypoints.emplace_back(v[0], v[1], v[2]);
    }
  }
  p.validate();
  return p;
}

void parse_testbed(const toml::table& root, Testbed& tb) {
  if (const auto* t = subtable(root, "testbed")) {
    check_keys(*t, "testbed", {"extent", "base_frequency", "rss_floor"});
    tb.extent = vec<3>(*t, "extent", tb.extent);
    tb.base_frequency = number(*t, "base_frequency", tb.base_frequency);
    tb.rss_floor = number(*t, "rss_floor", tb.rss_floor);
  }
  if (const auto* t = subtable(root, "photodiode")) {
    check_keys(*t, "photodiode", {"area", "fov_deg", "gain_table"});
    tb.photodiode.area = number(*t, "area", tb.photodiode.area);
    tb.photodiode.fov_half_angle = deg2rad(number(*t, "fov_deg", rad2deg(tb.photodiode.fov_half_angle)));
    if (const auto* g = t->get("gain_table")) {
      const auto* arr = g->as_array();
      if (!arr) throw ConfigError("'gain_table' must be an array of [angle_deg, gain]");
      std::vector<std::pair<double, double>> table;
      for (const auto& e : *arr) {
        const auto v = numbers(e, "gain_table");
        if (v.size() != 2) throw ConfigError("each gain_table entry must be [angle_deg, gain]");
        table.emplace_back(deg2rad(v[0]), v[1]);
      }
      try {
        tb.photodiode.gain = GainProfile(std::move(table));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (const auto* t = subtable(root, "noise")) {
    check_keys(*t, "noise", {"gaussian_sigma", "ambient_dc"});
    tb.noise.gaussian_sigma = number(*t, "gaussian_sigma", tb.noise.gaussian_sigma);
    tb.noise.ambient_dc = number(*t, "ambient_dc", tb.noise.ambient_dc);
  }
  if (const auto* t = subtable(root, "beacon")) {
    check_keys(*t, "beacon", {"sample_rate", "quantizer_bits", "full_scale", "random_phase"});
    tb.synthesis.sample_rate = number(*t, "sample_rate", tb.synthesis.sample_rate);
    tb.synthesis.quantizer_bits = static_cast<int>(integer(*t, "quantizer_bits", tb.synthesis.quantizer_bits));
    tb.synthesis.full_scale = number(*t, "full_scale", tb.synthesis.full_scale);
    tb.synthesis.random_phase = boolean(*t, "random_phase", tb.synthesis.random_phase);
  }
  if (const auto* node = root.get("luminaire")) {
    const auto* arr = node->as_array();
    if (!arr) throw ConfigError("'luminaire' must be an array of tables ([[luminaire]])");
    tb.luminaires.clear();
    int next_id = 1;
    for (const auto& e : *arr) {
      const auto* t = e.as_table();
      if (!t) throw ConfigError("'luminaire' entries must be tables");
      check_keys(*t, "luminaire", {"id", "position", "power", "lambertian_order", "frequency", "normal"});
      Luminaire l;
      l.id = static_cast<int>(integer(*t, "id", next_id));
      l.position = vec<3>(*t, "position", l.position);
      l.transmit_power = number(*t, "power", 4.7);
      l.lambertian_order = number(*t, "lambertian_order", 14.0);
      l.beacon_frequency = number(*t, "frequency", l.beacon_frequency);
      l.normal = vec<3>(*t, "normal", l.normal);
      tb.luminaires.push_back(l);
      next_id = l.id + 1;
    }
  }
  tb.validate();
}

void parse_sensors(const toml::table& root, SensorModels& s) {
  const auto* t = subtable(root, "sensors");
  if (!t) return;
  check_keys(*t, "sensors", {"baro", "imu"});
  if (const auto* b = subtable(*t, "baro")) {
    check_keys(*b, "sensors.baro", {"noise_sigma", "drift_rate", "initial_offset"});
    s.baro.noise_sigma = number(*b, "noise_sigma", s.baro.noise_sigma);
    s.baro.drift_rate = number(*b, "drift_rate", s.baro.drift_rate);
    s.baro.initial_offset = number(*b, "initial_offset", s.baro.initial_offset);
    if (!(s.baro.noise_sigma >= 0)) throw ConfigError("sensors.baro.noise_sigma must be >= 0");
  }
  if (const auto* i = subtable(*t, "imu")) {
    check_keys(*i, "sensors.imu", {"accel_noise_sigma", "accel_bias", "angle_noise_deg"});
    s.imu.accel_noise_sigma = number(*i, "accel_noise_sigma", s.imu.accel_noise_sigma);
    s.imu.accel_bias = vec<3>(*i, "accel_bias", s.imu.accel_bias);
    s.imu.angle_noise_sigma = deg2rad(number(*i, "angle_noise_deg", rad2deg(s.imu.angle_noise_sigma)));
    if (!(s.imu.accel_noise_sigma >= 0 && s.imu.angle_noise_sigma >= 0))
      throw ConfigError("sensors.imu noise sigmas must be >= 0");
  }
}

void parse_solvers(const toml::table& root, SolverSettings& s) {
  if (const auto* t = subtable(root, "fusion")) {
    check_keys(*t, "fusion",
               {"gain", "damping", "epsilon", "tilt_threshold_deg", "stride_k", "drift_correction", "ceiling"});
    auto& h = s.height;
    h.filter.gain = number(*t, "gain", h.filter.gain);
    h.filter.damping = number(*t, "damping", h.filter.damping);
    h.drift.epsilon = number(*t, "epsilon", h.drift.epsilon);
    h.drift.tilt_threshold = deg2rad(number(*t, "tilt_threshold_deg", rad2deg(h.drift.tilt_threshold)));
    h.drift.stride_k = static_cast<int>(integer(*t, "stride_k", h.drift.stride_k));
    h.drift_correction = boolean(*t, "drift_correction", h.drift_correction);
    h.ceiling = number(*t, "ceiling", h.ceiling);
  }
  const auto read_indirect = [](const toml::table& t, std::string_view where, IndirectHConfig& c) {
    check_keys(t, where, {"height_min", "height_max", "resolution", "fast_search"});
    c.height_min = number(t, "height_min", c.height_min);
    c.height_max = number(t, "height_max", c.height_max);
    c.resolution = number(t, "resolution", c.resolution);
    c.fast_search = boolean(t, "fast_search", c.fast_search);
  };
  if (const auto* t = subtable(root, "indirect_h")) read_indirect(*t, "indirect_h", s.indirect_h);
  if (const auto* t = subtable(root, "drift_vlp")) read_indirect(*t, "drift_vlp", s.drift_vlp);
  if (const auto* t = subtable(root, "pso")) {
    check_keys(*t, "pso", {"swarm_size", "iterations", "bounds_min", "bounds_max", "inertia", "cognitive", "social"});
    s.pso.swarm_size = static_cast<int>(integer(*t, "swarm_size", s.pso.swarm_size));
    s.pso.iterations = static_cast<int>(integer(*t, "iterations", s.pso.iterations));
    s.pso.bounds = Eigen::AlignedBox3d(vec<3>(*t, "bounds_min", Eigen::Vector3d(s.pso.bounds.min())),
                                       vec<3>(*t, "bounds_max", Eigen::Vector3d(s.pso.bounds.max())));
    s.pso.inertia = number(*t, "inertia", s.pso.inertia);
    s.pso.cognitive = number(*t, "cognitive", s.pso.cognitive);
    s.pso.social = number(*t, "social", s.pso.social);
  }
  s.height.filter.validate();
  s.height.drift.validate();
  s.indirect_h.validate();
  s.drift_vlp.validate();
  s.pso.validate();
}

}  // namespace

FlightPlan RunConfig::flight(const std::string& name) const {
  if (auto it = flights.find(name); it != flights.end()) return it->second;
  return named_flight(name);
}

std::vector<FlightPlan> RunConfig::flight_set(const std::string& name) const {
  if (name != "batch") return {flight(name)};
  std::vector<FlightPlan> out;
  for (int i = 1; i <= 8; ++i) out.push_back(flight("flight" + std::to_string(i)));
  return out;
}

RunConfig parse_config(std::string_view source, std::string_view source_name) {
  toml::table root;
  try {
    root = toml::parse(source, source_name);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source_name << ": " << e.description() << " (" << e.source().begin << ")";
    throw ConfigError(os.str());
  }
  check_keys(root, "root",
             {"testbed", "photodiode", "noise", "beacon", "luminaire", "sensors", "fusion", "indirect_h",
              "drift_vlp", "pso", "flights"});
  RunConfig cfg;
  cfg.source_text = std::string(source);
  parse_testbed(root, cfg.testbed);
  parse_sensors(root, cfg.sensors);
  parse_solvers(root, cfg.solvers);
  if (const auto* f = subtable(root, "flights")) {
    for (const auto& [k, v] : *f) {
      const auto* t = v.as_table();
      if (!t) throw ConfigError("flights." + std::string(k.str()) + " must be a table");
      cfg.flights[std::string(k.str())] = parse_flight(std::string(k.str()), *t);
    }
  }
  cfg.solvers.height.ceiling = std::min(cfg.solvers.height.ceiling, cfg.testbed.extent.z());
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace vlp
