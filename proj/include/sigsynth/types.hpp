#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sigsynth {

/// Closed interval a centroid coordinate is drawn from.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  void validate(const std::string& name) const;
};

/// Parameter tuple identifying one virtual appliance in the waveform-rate
/// (kHz) model. Signatures of the appliance are sampled around this point.
struct HfCentroid {
  int harmonic_count = 8;
  double re0 = 0.0;  ///< spectral centroid, real coordinate
  double im0 = 0.0;  ///< spectral centroid, imaginary coordinate
  double mu = 0.0;     ///< log-normal envelope shape
  double sigma = 1.0;  ///< log-normal envelope shape, > 0
  int parity = 0;      ///< 0 or 1: selects which harmonic orders dropout removes
  int dropout = 0;     ///< 1 zeroes one parity of harmonics, 0 keeps all
  double rho = 0.5;       ///< AR(1) coefficient for spectrum drift, |rho| < 1
  double amplitude = 1.0; ///< mean cycle amplitude, > 0
  double peak_ratio = 1.0; ///< startup peak to steady-state ratio, >= 1
  double tau = 0.0;        ///< transient decay constant, per sample

  void validate() const;
};

/// Which optional multiplicative factors an appliance's primitive cycles use.
/// The constant-amplitude and gaussian-noise factors are always active.
struct BasisMask {
  bool startup = true;       ///< exponential startup overshoot
  bool second_order = false; ///< damped second-order system response
};

/// Parameter tuple identifying one virtual appliance in the RMS-rate (Hz)
/// model.
struct LfCentroid {
  double amplitude = 100.0;
  double peak_ratio = 0.5; ///< startup overshoot gain, >= 0
  double tau = 0.01;       ///< startup decay constant, 1/s
  double q0 = 0.2, q1 = 1.0, q2 = 1.0, q3 = 1.0; ///< transfer-function coefficients
  double alpha = 2.0, beta = 2.0; ///< Beta-distribution shapes
  double cycle_seconds = 60.0;    ///< mean primitive-cycle duration
  double gap_seconds = 30.0;      ///< mean delay between consecutive cycles
  int cycle_count = 1;            ///< primitive cycles per signature, fixed per appliance
  double noise_sd = 0.01;         ///< multiplicative gaussian noise std
  BasisMask basis;

  void validate() const;
};

/// Knobs shared by both generators.
struct GenConfig {
  std::uint64_t master_seed = 1;
  double diversity_var = 0.05; ///< variance of the per-signature parameter scatter
  int samples_per_cycle = 500; ///< waveform-rate samples per mains cycle, >= 4
  int cycles_per_signature = 10;
  double lf_rate_hz = 1.0;    ///< RMS-rate sampling frequency
  double beta_off_prob = 0.5; ///< probability the beta factor is disabled per cycle
  int signatures_per_appliance = 10;
  bool correlated_amplitude = false; ///< evolve cycle amplitude as an AR(1) process

  void validate() const;
};

/// One labeled sample sequence.
struct Signature {
  int appliance_id = 0;
  int signature_id = 0;
  std::vector<double> samples;
  double rate_hz = 1.0;
};

enum class DatasetKind { hf, lf, external };

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string& s);

/// Generation provenance. Everything needed to regenerate a dataset
/// bit-for-bit: seed, config, and the exact centroids used.
struct Manifest {
  DatasetKind kind = DatasetKind::external;
  GenConfig config;
  std::vector<HfCentroid> hf_centroids;
  std::vector<LfCentroid> lf_centroids;
};

struct Dataset {
  std::vector<Signature> signatures;
  Manifest manifest;

  /// Throws std::invalid_argument unless appliance ids form a contiguous
  /// 0-based range, (appliance_id, signature_id) pairs are unique, and every
  /// signature is nonempty, finite, and has a positive rate.
  void validate() const;
};

enum class ExecMode { serial, parallel };

} // namespace sigsynth
