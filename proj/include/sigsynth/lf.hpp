#pragma once

#include <cstddef>
#include <vector>

#include "sigsynth/rng.hpp"
#include "sigsynth/types.hpp"

namespace sigsynth::lf {

/// Resolved parameters of one primitive cycle (sampled around the centroid).
struct CycleParams {
  double amplitude = 1.0;
  double peak_ratio = 0.0;
  double tau = 0.0;
  double q0 = 0.0, q1 = 1.0, q2 = 0.0, q3 = 0.0;
  double alpha = 1.0, beta = 1.0;
  double noise_sd = 0.0;
  int length_samples = 1;
  double rate_hz = 1.0;
  bool use_startup = false;
  bool use_second_order = false;
  bool use_beta = false;

  void validate() const;
};

/// Cycle parameters plus the zero-consumption gap lengths between them.
/// gaps has exactly cycles.size() - 1 entries.
struct SignaturePlan {
  std::vector<CycleParams> cycles;
  std::vector<int> gaps;
};

/// Startup factor 1 + peak_ratio * exp(-tau * t), t in seconds.
double startup_factor(double peak_ratio, double tau, double t);
std::vector<double> eval_startup(double peak_ratio, double tau,
                                 std::size_t count, double rate_hz);

/// Impulse response h(t) of the transfer function q0 / (q1 s^2 + q2 s + q3),
/// evaluated analytically by root analysis (distinct real, repeated, or
/// complex-conjugate pole pairs). h(0) = 0 in all three regimes.
/// Throws std::invalid_argument when q1 <= 0.
double second_order_impulse(double q0, double q1, double q2, double q3,
                            double t);
/// 1 + h(t_k) over the grid t_k = k / rate_hz.
std::vector<double> eval_second_order(double q0, double q1, double q2,
                                      double q3, std::size_t count,
                                      double rate_hz);

/// Renders one primitive cycle as the pointwise product of the enabled
/// factors: constant amplitude, startup decay, second-order response,
/// per-sample gaussian noise N(1, noise_sd^2), and per-sample Beta noise.
std::vector<double> synth_cycle(const CycleParams& p, RngStream& rng);

/// Samples per-cycle parameters around the centroid (folded normal with the
/// configured diversity variance), discretizes durations to samples, and
/// applies the beta-factor conditioning: the factor is disabled with
/// probability beta_off_prob and always disabled on cycles whose amplitude
/// exceeds the signature's mean cycle amplitude.
SignaturePlan plan_signature(const LfCentroid& c, const GenConfig& cfg,
                             RngStream& rng);

/// Renders every planned cycle, right-pads all but the last with its gap of
/// exact zeros, and concatenates.
Signature assemble_signature(const SignaturePlan& plan, RngStream& rng,
                             int appliance_id = 0, int signature_id = 0);

struct CentroidRanges {
  Range amplitude{10.0, 2000.0};
  Range peak_ratio{0.1, 2.0};
  Range tau{0.005, 0.1};
  Range q0{0.1, 0.5};
  Range q1{0.5, 2.0};
  Range q2{0.5, 2.0};
  Range q3{0.5, 2.0};
  Range alpha{1.0, 5.0};
  Range beta{1.0, 5.0};
  Range cycle_seconds{30.0, 600.0};
  Range gap_seconds{5.0, 120.0};
  Range noise_sd{0.005, 0.05};
  double cycle_mean = 3.0;    ///< Poisson mean for the cycle count
  double startup_prob = 0.8;  ///< probability the startup factor is enabled
  double second_order_prob = 0.3;

  void validate() const;
};

std::vector<LfCentroid> sample_centroids(int count, const CentroidRanges& ranges,
                                         RngStream& rng);

/// RMS-rate counterpart of hf::generate_dataset; same determinism contract.
Dataset generate_dataset(const std::vector<LfCentroid>& centroids,
                         const GenConfig& cfg,
                         ExecMode mode = ExecMode::parallel);

} // namespace sigsynth::lf
