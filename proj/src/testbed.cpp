#include "vlp/testbed.hpp"

#include <set>
#include <string>

#include "vlp/errors.hpp"
#include "vlp/units.hpp"

namespace vlp {

Testbed Testbed::reference() {
  Testbed tb;
  const struct {
    int id;
    double x, y, f;
  } layout[] = {{1, 0.25, 1.0, 60.0}, {2, 1.0, 1.75, 120.0}, {3, 1.75, 1.0, 240.0}, {4, 1.0, 0.25, 480.0}};
  for (const auto& l : layout) {
    Luminaire lum;
    lum.id = l.id;
    lum.position = {l.x, l.y, 0.0};
    lum.transmit_power = 4.7;
    lum.lambertian_order = 14;
    lum.beacon_frequency = l.f;
    tb.luminaires.push_back(lum);
  }
  tb.photodiode.area = 5.2e-6;
  tb.photodiode.fov_half_angle = deg2rad(160.0);
  tb.noise.gaussian_sigma = 2e-7;
  tb.noise.ambient_dc = 5e-6;
  tb.rss_floor = 6.5e-8;
  return tb;
}

void Testbed::validate() const {
  if (!(extent.array() > 0).all()) throw ConfigError("testbed: extent must be positive");
  if (luminaires.empty()) throw ConfigError("testbed: no luminaires");
  std::set<int> ids;
  for (const auto& l : luminaires) {
    try {
      l.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!contains(l.position)) throw ConfigError("testbed: luminaire " + std::to_string(l.id) + " outside extent");
    if (!ids.insert(l.id).second) throw ConfigError("testbed: duplicate luminaire id " + std::to_string(l.id));
  }
  try {
    photodiode.validate();
    noise.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  beacon_plan().validate();
  if (!(synthesis.sample_rate > 2 * beacon_plan().max_frequency()))
    throw ConfigError("testbed: sample rate must exceed twice the highest beacon frequency");
  if (!(rss_floor >= 0)) throw ConfigError("testbed: rss_floor must be >= 0");
}

}  // namespace vlp
