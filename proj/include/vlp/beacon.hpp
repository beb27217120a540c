#pragma once

// FDMA beacons: every luminaire blinks a 50% duty square wave at a unique
// frequency f0 * 2^n, and the receiver recovers each amplitude from one
// spectral bin of the photodiode signal.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vlp/channel.hpp"

namespace vlp {

struct BeaconAssignment {
  int luminaire_id = 0;
  double frequency = 0;  // Hz
};

struct BeaconPlan {
  double base_frequency = 60.0;  // f0, Hz
  std::vector<BeaconAssignment> assignments;

  /// Throws ConfigError unless every frequency is f0 * 2^n (n >= 0) and ids
  /// and frequencies are unique.
  void validate() const;
  double max_frequency() const;

  /// Plan that reads each luminaire's own beacon frequency.
  static BeaconPlan from_luminaires(double base_frequency, std::span<const Luminaire> luminaires);
};

struct SampledWaveform {
  double sample_rate = 0;  // Hz
  double start_time = 0;   // s
  std::vector<double> samples;
};

struct SynthesisOptions {
  double sample_rate = 7680.0;  // Hz; 128 samples per 60 Hz period
  // ADC model: 0 disables quantization, otherwise `quantizer_bits` over [0, full_scale] W.
  int quantizer_bits = 0;
  double full_scale = 1e-3;
  // Independent random start phase per beacon (no transmitter synchronization).
  bool random_phase = false;
  double start_time = 0;
};

/// Composite photodiode signal for `duration` seconds. `powers[i]` is the
/// peak received power of `plan.assignments[i]`; an empty span means no
/// beacon is visible. Noise is i.i.d. Gaussian per sample plus ambient DC.
SampledWaveform synthesize_composite(std::span<const double> powers, const BeaconPlan& plan, double duration,
                                     const NoiseModel& noise, std::uint64_t seed,
                                     const SynthesisOptions& options = {});

/// Fundamental amplitude of a sampled 0 -> 1 square wave with `samples_per_period`
/// samples per cycle; tends to 2/pi as the sampling gets finer.
double square_wave_fundamental_gain(double samples_per_period);

/// Per-assignment received power recovered from the spectrum. Uses the
/// longest prefix holding a whole number of f0 periods; throws SignalError
/// when a beacon frequency does not land on a bin.
std::vector<double> extract_rss(const SampledWaveform& waveform, const BeaconPlan& plan);

/// Magnitude-derived power estimate at an arbitrary bin frequency, using the
/// same scaling as extract_rss (for leakage diagnostics).
double rss_at_frequency(const SampledWaveform& waveform, double base_frequency, double frequency);

void write_waveform_csv(std::ostream& out, const SampledWaveform& waveform);

}  // namespace vlp
