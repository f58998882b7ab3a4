#pragma once

#include <cstdint>
#include <random>

namespace sigsynth {

/// Deterministic random stream with portable distribution samplers.
///
/// The engine is std::mt19937_64 (bit-exact across platforms by the
/// standard); all samplers below are implemented here rather than with
/// std::*_distribution so that draws are reproducible independent of the
/// standard library in use.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in [lo, hi]; degenerate lo == hi returns lo exactly.
  double uniform(double lo, double hi);
  /// Fair bit.
  bool bit() { return (next_u64() >> 63) != 0; }
  /// True with probability p.
  bool coin(double p) { return uniform() < p; }

  /// Gaussian draw (Box-Muller, fixed two uniforms per call).
  double normal(double mean, double stddev);
  /// |N(mean, var)|. var == 0 collapses to |mean| exactly.
  /// Throws std::invalid_argument for negative var.
  double folded_normal(double mean, double var);
  /// Exp(1) draw.
  double exponential();
  /// Poisson draw via cumulative exponential arrivals; exact for any lambda
  /// that fits a double, O(lambda) per draw.
  int poisson(double lambda);
  /// Gamma(shape, 1) via Marsaglia-Tsang squeeze.
  double gamma(double shape);
  /// Beta(a, b) as the gamma ratio x / (x + y).
  double beta(double a, double b);

 private:
  std::mt19937_64 eng_;
};

enum class StreamDomain : std::uint64_t {
  signature = 0, ///< per-(appliance, signature) generation streams
  centroid = 1,  ///< centroid sampling
};

/// Derives an independent stream from (master_seed, appliance_idx,
/// signature_idx). The same triple always yields the same stream; distinct
/// triples yield statistically independent streams (hash-derived seeding),
/// so signatures can be generated in any order or in parallel.
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t appliance_idx,
                        std::uint64_t signature_idx,
                        StreamDomain domain = StreamDomain::signature);

} // namespace sigsynth
