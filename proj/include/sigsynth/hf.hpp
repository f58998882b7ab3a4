#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sigsynth/rng.hpp"
#include "sigsynth/types.hpp"

namespace sigsynth::hf {

/// Assumed mains frequency; waveform-rate signatures report
/// rate_hz = kMainsHz * samples_per_cycle.
inline constexpr double kMainsHz = 60.0;

/// One cycle's harmonic spectrum. z[0] is the DC bin and is always 0;
/// z[i] is the i-th harmonic. Retained harmonics have Im <= 0.
struct SpectrumFrame {
  std::vector<std::complex<double>> z;
};

/// Per-harmonic AR(1) state: polar offsets around the spectral centroid.
struct ArState {
  std::vector<double> radius;
  std::vector<double> angle; ///< in [0, 2*pi)
};

/// One AR(1) update: |rho * prev + eps|, optionally wrapped into [0, 2*pi).
/// eps is drawn by the caller.
double ar1_step(double prev, double rho, double eps, bool wrap_2pi = false);

/// Builds one cycle's spectrum from the centroid and the current AR state:
/// polar offset around (re0, im0), reflection into Im <= 0, log-normal
/// envelope over harmonic order, then parity dropout (the fundamental is
/// never dropped).
SpectrumFrame build_spectrum_frame(const HfCentroid& c, const ArState& state);

/// Renders one cycle: real inverse transform of the Hermitian-expanded
/// one-sided spectrum, rescaled so max |w| equals amplitude.
/// Requires samples >= 2 * harmonic count; throws on an all-zero frame.
std::vector<double> synth_cycle(const SpectrumFrame& frame, double amplitude,
                                int samples);

/// Startup envelope value 1 + (peak_ratio - 1) * exp(-tau * t); equals
/// peak_ratio exactly at t = 0 and decays monotonically to 1.
double transient_multiplier(double peak_ratio, double tau, std::int64_t t);

/// Applies the startup envelope pointwise over a whole signature.
std::vector<double> apply_transient(std::vector<double> samples,
                                    double peak_ratio, double tau);

/// Per-signature generation details, exposed for tests and diagnostics.
struct SynthTrace {
  std::vector<double> cycle_amplitudes;
};

/// Generates one waveform-rate signature: initializes the AR state from the
/// noise, then per cycle advances the state, builds a spectrum frame,
/// renders the cycle, concatenates, and finally applies the startup
/// envelope over the concatenation.
Signature synth_signature(const HfCentroid& c, const GenConfig& cfg,
                          RngStream& rng, int appliance_id = 0,
                          int signature_id = 0, SynthTrace* trace = nullptr);

/// Uniform sampling bounds for centroid coordinates.
struct CentroidRanges {
  Range re0{-1.0, 1.0};
  Range im0{-1.0, 1.0};
  Range mu{0.0, 1.0};
  Range sigma{0.25, 1.0};
  Range rho{0.1, 0.9};
  Range amplitude{0.5, 5.0};
  Range peak_ratio{1.0, 4.0};
  Range tau{0.001, 0.05};
  double harmonic_mean = 15.0; ///< Poisson mean for the harmonic count

  void validate() const;
};

/// Draws `count` centroids: every real coordinate uniform in its range, the
/// harmonic count Poisson-distributed (clamped >= 1), parity and dropout
/// fair bits.
std::vector<HfCentroid> sample_centroids(int count, const CentroidRanges& ranges,
                                         RngStream& rng);

/// Generates signatures_per_appliance signatures for every centroid.
/// Serial and parallel modes produce bit-identical datasets: each
/// (appliance, signature) pair gets its own derived stream.
Dataset generate_dataset(const std::vector<HfCentroid>& centroids,
                         const GenConfig& cfg,
                         ExecMode mode = ExecMode::parallel);

} // namespace sigsynth::hf
