#include "vlp/beacon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include <unsupported/Eigen/FFT>

#include "vlp/errors.hpp"

namespace vlp {
namespace {

bool is_integer(double v, double tol = 1e-9) { return std::abs(v - std::round(v)) <= tol * std::max(1.0, std::abs(v)); }

struct Spectrum {
  std::vector<std::complex<double>> bins;
  std::size_t length = 0;
};

Spectrum analyse(const SampledWaveform& waveform, double base_frequency) {
  if (!(waveform.sample_rate > 0)) throw SignalError("extract_rss: sample rate must be > 0");
  const double window = waveform.sample_rate / base_frequency;
  if (!is_integer(window))
    throw SignalError("extract_rss: one base period is not an integer number of samples");
  const auto window_len = static_cast<std::size_t>(std::llround(window));
  const std::size_t windows = waveform.samples.size() / window_len;
  if (windows == 0) throw SignalError("extract_rss: waveform shorter than one analysis window");

  Spectrum s;
  s.length = windows * window_len;
  std::vector<double> in(waveform.samples.begin(), waveform.samples.begin() + static_cast<std::ptrdiff_t>(s.length));
  Eigen::FFT<double> fft;
  fft.fwd(s.bins, in);
  return s;
}

double power_at(const Spectrum& s, double sample_rate, double frequency) {
  const double bin = frequency * static_cast<double>(s.length) / sample_rate;
  if (!is_integer(bin)) throw SignalError("extract_rss: frequency " + std::to_string(frequency) + " Hz is not on a bin");
  const auto k = static_cast<std::size_t>(std::llround(bin));
  if (k == 0 || 2 * k >= s.length) throw SignalError("extract_rss: frequency outside (0, Nyquist)");
  const double amplitude = 2.0 * std::abs(s.bins[k]) / static_cast<double>(s.length);
  return amplitude / square_wave_fundamental_gain(sample_rate / frequency);
}

}  // namespace

void BeaconPlan::validate() const {
  if (!(base_frequency > 0)) throw ConfigError("beacon plan: base frequency must be > 0");
  std::set<int> ids;
  std::set<long long> freqs;
  for (const auto& a : assignments) {
    const double ratio = a.frequency / base_frequency;
    const double n = std::log2(ratio);
    if (!(ratio >= 1) || !is_integer(n, 1e-12))
      throw ConfigError("beacon plan: frequency " + std::to_string(a.frequency) + " Hz is not f0 * 2^n");
    if (!ids.insert(a.luminaire_id).second)
      throw ConfigError("beacon plan: luminaire " + std::to_string(a.luminaire_id) + " assigned twice");
    if (!freqs.insert(std::llround(n)).second)
      throw ConfigError("beacon plan: frequency " + std::to_string(a.frequency) + " Hz assigned twice");
  }
}

double BeaconPlan::max_frequency() const {
  double f = 0;
  for (const auto& a : assignments) f = std::max(f, a.frequency);
  return f;
}

BeaconPlan BeaconPlan::from_luminaires(double base_frequency, std::span<const Luminaire> luminaires) {
  BeaconPlan plan;
  plan.base_frequency = base_frequency;
  for (const auto& l : luminaires) plan.assignments.push_back({l.id, l.beacon_frequency});
  return plan;
}

double square_wave_fundamental_gain(double samples_per_period) {
  const double even = std::round(samples_per_period / 2) * 2;
  if (std::abs(samples_per_period - even) < 1e-9 && even >= 2)
    return 2.0 / (even * std::sin(std::numbers::pi / even));
  return 2.0 / std::numbers::pi;
}

SampledWaveform synthesize_composite(std::span<const double> powers, const BeaconPlan& plan, double duration,
                                     const NoiseModel& noise, std::uint64_t seed, const SynthesisOptions& options) {
  plan.validate();
  noise.validate();
  if (!powers.empty() && powers.size() != plan.assignments.size())
    throw std::invalid_argument("synthesize_composite: one power per assignment required");
  if (!(options.sample_rate > 2 * plan.max_frequency()))
    throw SignalError("synthesize_composite: sample rate must exceed twice the highest beacon frequency");
  if (!(duration * plan.base_frequency >= 1 - 1e-9))
    throw std::invalid_argument("synthesize_composite: duration must cover one base period");

  std::mt19937_64 rng(seed);
  std::vector<double> phase(plan.assignments.size(), 0.0);
  if (options.random_phase) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& p : phase) p = unit(rng);
  }

  SampledWaveform w;
  w.sample_rate = options.sample_rate;
  w.start_time = options.start_time;
  const auto n = static_cast<std::size_t>(std::llround(duration * options.sample_rate));
  w.samples.assign(n, noise.ambient_dc);

  for (std::size_t b = 0; b < powers.size(); ++b) {
    const double f = plan.assignments[b].frequency;
    const double origin = f * options.start_time + phase[b];
    const double step = f / options.sample_rate;
    for (std::size_t i = 0; i < n; ++i) {
      const double cycle = origin + step * static_cast<double>(i);
      if (cycle - std::floor(cycle) < 0.5) w.samples[i] += powers[b];
    }
  }

  if (noise.gaussian_sigma > 0) {
    std::normal_distribution<double> gauss(0.0, noise.gaussian_sigma);
    for (auto& s : w.samples) s += gauss(rng);
  }

  if (options.quantizer_bits > 0) {
    const double levels = std::ldexp(1.0, options.quantizer_bits) - 1;
    for (auto& s : w.samples) {
      const double code = std::clamp(std::round(s / options.full_scale * levels), 0.0, levels);
      s = code / levels * options.full_scale;
    }
  }
  return w;
}

std::vector<double> extract_rss(const SampledWaveform& waveform, const BeaconPlan& plan) {
  plan.validate();
  const Spectrum s = analyse(waveform, plan.base_frequency);
  std::vector<double> out;
  out.reserve(plan.assignments.size());
  for (const auto& a : plan.assignments) out.push_back(power_at(s, waveform.sample_rate, a.frequency));
  return out;
}

double rss_at_frequency(const SampledWaveform& waveform, double base_frequency, double frequency) {
  return power_at(analyse(waveform, base_frequency), waveform.sample_rate, frequency);
}

void write_waveform_csv(std::ostream& out, const SampledWaveform& waveform) {
  out << "t,value\n";
  char buf[64];
  for (std::size_t i = 0; i < waveform.samples.size(); ++i) {
    const double t = waveform.start_time + static_cast<double>(i) / waveform.sample_rate;
    auto r = std::to_chars(buf, buf + sizeof buf, t);
    out.write(buf, r.ptr - buf) << ',';
    r = std::to_chars(buf, buf + sizeof buf, waveform.samples[i]);
    out.write(buf, r.ptr - buf) << '\n';
  }
}

}  // namespace vlp
