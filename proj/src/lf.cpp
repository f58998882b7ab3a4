#include "sigsynth/lf.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace sigsynth::lf {
namespace {

constexpr double kMaxCycleSamples = 100e6;

// round-half-up discretization of a duration in seconds
std::int64_t to_samples(double seconds, double rate_hz) {
  const double v = std::floor(seconds * rate_hz + 0.5);
  if (!(v < kMaxCycleSamples)) {
    throw std::invalid_argument("lf plan: discretized duration is too long");
  }
  return static_cast<std::int64_t>(v);
}

} // namespace

void CycleParams::validate() const {
  if (!(amplitude >= 0.0 && peak_ratio >= 0.0 && tau >= 0.0 && q0 >= 0.0 &&
        q1 >= 0.0 && q2 >= 0.0 && q3 >= 0.0 && noise_sd >= 0.0)) {
    throw std::invalid_argument("cycle params: parameters must be nonnegative");
  }
  if (length_samples < 1) {
    throw std::invalid_argument("cycle params: length_samples must be >= 1");
  }
  if (!(rate_hz > 0.0)) {
    throw std::invalid_argument("cycle params: rate_hz must be positive");
  }
  if (use_second_order && !(q1 > 0.0)) {
    throw std::invalid_argument(
        "cycle params: q1 must be positive when the second-order factor is on");
  }
  if (use_beta && !(alpha > 0.0 && beta > 0.0)) {
    throw std::invalid_argument(
        "cycle params: Beta shapes must be positive when the beta factor is on");
  }
}

double startup_factor(double peak_ratio, double tau, double t) {
  return 1.0 + peak_ratio * std::exp(-tau * t);
}

std::vector<double> eval_startup(double peak_ratio, double tau,
                                 std::size_t count, double rate_hz) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = startup_factor(peak_ratio, tau, static_cast<double>(k) / rate_hz);
  }
  return out;
}

double second_order_impulse(double q0, double q1, double q2, double q3,
                            double t) {
  if (!(q1 > 0.0)) {
    throw std::invalid_argument("second_order_impulse: q1 must be positive");
  }
  if (q0 == 0.0) return 0.0;
  const double disc = q2 * q2 - 4.0 * q1 * q3;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double s_slow = (-q2 + sq) / (2.0 * q1);
    const double s_fast = (-q2 - sq) / (2.0 * q1);
    const double delta = sq / q1;
    if (delta * t < 1.0) {
      // expm1 keeps the difference quotient accurate as the poles coalesce
      return q0 / (q1 * delta) * std::exp(s_fast * t) * std::expm1(delta * t);
    }
    // well-separated exponents: the plain difference neither cancels nor
    // overflows (expm1(delta * t) would)
    return q0 / (q1 * delta) * (std::exp(s_slow * t) - std::exp(s_fast * t));
  }
  if (disc < 0.0) {
    const double omega = std::sqrt(-disc) / (2.0 * q1);
    const double decay = -q2 / (2.0 * q1);
    return q0 / (q1 * omega) * std::exp(decay * t) * std::sin(omega * t);
  }
  const double s0 = -q2 / (2.0 * q1);
  return (q0 / q1) * t * std::exp(s0 * t);
}

std::vector<double> eval_second_order(double q0, double q1, double q2,
                                      double q3, std::size_t count,
                                      double rate_hz) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] =
        1.0 + second_order_impulse(q0, q1, q2, q3, static_cast<double>(k) / rate_hz);
  }
  return out;
}

std::vector<double> synth_cycle(const CycleParams& p, RngStream& rng) {
  p.validate();
  std::vector<double> w(static_cast<std::size_t>(p.length_samples));
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double t = static_cast<double>(k) / p.rate_hz;
    double v = p.amplitude;
    if (p.use_startup) v *= startup_factor(p.peak_ratio, p.tau, t);
    if (p.use_second_order) {
      v *= 1.0 + second_order_impulse(p.q0, p.q1, p.q2, p.q3, t);
    }
    v *= rng.normal(1.0, p.noise_sd);
    if (p.use_beta) v *= rng.beta(p.alpha, p.beta);
    w[k] = v;
  }
  return w;
}

SignaturePlan plan_signature(const LfCentroid& c, const GenConfig& cfg,
                             RngStream& rng) {
  c.validate();
  cfg.validate();
  const int n = c.cycle_count;
  const double var = cfg.diversity_var;

  SignaturePlan plan;
  plan.cycles.reserve(n);
  for (int i = 0; i < n; ++i) {
    CycleParams p;
    p.amplitude = rng.folded_normal(c.amplitude, var);
    p.peak_ratio = rng.folded_normal(c.peak_ratio, var);
    p.tau = rng.folded_normal(c.tau, var);
    p.q0 = rng.folded_normal(c.q0, var);
    p.q1 = rng.folded_normal(c.q1, var);
    p.q2 = rng.folded_normal(c.q2, var);
    p.q3 = rng.folded_normal(c.q3, var);
    p.alpha = rng.folded_normal(c.alpha, var);
    p.beta = rng.folded_normal(c.beta, var);
    p.noise_sd = rng.folded_normal(c.noise_sd, var);
    const double dur = rng.folded_normal(c.cycle_seconds, var);
    p.length_samples =
        static_cast<int>(std::max<std::int64_t>(1, to_samples(dur, cfg.lf_rate_hz)));
    p.rate_hz = cfg.lf_rate_hz;
    p.use_startup = c.basis.startup;
    p.use_second_order = c.basis.second_order;
    p.use_beta = true; // conditioned below
    plan.cycles.push_back(p);
  }
  plan.gaps.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double gap = rng.folded_normal(c.gap_seconds, var);
    plan.gaps.push_back(
        static_cast<int>(std::max<std::int64_t>(0, to_samples(gap, cfg.lf_rate_hz))));
  }

  double mean_amplitude = 0.0;
  for (const CycleParams& p : plan.cycles) mean_amplitude += p.amplitude;
  mean_amplitude /= static_cast<double>(n);

  // The beta factor models low-power fluctuating regimes: drop it at random
  // and always on cycles louder than the signature's mean cycle amplitude.
  // The coin is drawn unconditionally so the stream layout does not depend
  // on the amplitudes.
  for (CycleParams& p : plan.cycles) {
    const bool off = rng.coin(cfg.beta_off_prob);
    p.use_beta = !(off || p.amplitude > mean_amplitude);
  }
  return plan;
}

Signature assemble_signature(const SignaturePlan& plan, RngStream& rng,
                             int appliance_id, int signature_id) {
  if (plan.cycles.empty()) {
    throw std::invalid_argument("assemble_signature: plan has no cycles");
  }
  if (plan.gaps.size() + 1 != plan.cycles.size()) {
    throw std::invalid_argument(
        "assemble_signature: need exactly one gap between consecutive cycles");
  }

  std::size_t total = 0;
  for (const CycleParams& p : plan.cycles) {
    total += static_cast<std::size_t>(p.length_samples);
  }
  for (int g : plan.gaps) total += static_cast<std::size_t>(g);

  std::vector<double> samples;
  samples.reserve(total);
  for (std::size_t i = 0; i < plan.cycles.size(); ++i) {
    const std::vector<double> cycle = synth_cycle(plan.cycles[i], rng);
    samples.insert(samples.end(), cycle.begin(), cycle.end());
    if (i + 1 < plan.cycles.size()) {
      samples.insert(samples.end(), static_cast<std::size_t>(plan.gaps[i]), 0.0);
    }
  }

  Signature sig;
  sig.appliance_id = appliance_id;
  sig.signature_id = signature_id;
  sig.samples = std::move(samples);
  sig.rate_hz = plan.cycles.front().rate_hz;
  return sig;
}

void CentroidRanges::validate() const {
  amplitude.validate("amplitude");
  peak_ratio.validate("peak_ratio");
  tau.validate("tau");
  q0.validate("q0");
  q1.validate("q1");
  q2.validate("q2");
  q3.validate("q3");
  alpha.validate("alpha");
  beta.validate("beta");
  cycle_seconds.validate("cycle_seconds");
  gap_seconds.validate("gap_seconds");
  noise_sd.validate("noise_sd");
  if (!(cycle_mean > 0.0)) {
    throw std::invalid_argument("lf ranges: cycle_mean must be positive");
  }
  if (startup_prob < 0.0 || startup_prob > 1.0 || second_order_prob < 0.0 ||
      second_order_prob > 1.0) {
    throw std::invalid_argument("lf ranges: factor probabilities must be in [0, 1]");
  }
}

std::vector<LfCentroid> sample_centroids(int count, const CentroidRanges& ranges,
                                         RngStream& rng) {
  if (count < 0) throw std::invalid_argument("sample_centroids: count < 0");
  ranges.validate();
  std::vector<LfCentroid> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    LfCentroid c;
    c.amplitude = rng.uniform(ranges.amplitude.lo, ranges.amplitude.hi);
    c.peak_ratio = rng.uniform(ranges.peak_ratio.lo, ranges.peak_ratio.hi);
    c.tau = rng.uniform(ranges.tau.lo, ranges.tau.hi);
    c.q0 = rng.uniform(ranges.q0.lo, ranges.q0.hi);
    c.q1 = rng.uniform(ranges.q1.lo, ranges.q1.hi);
    c.q2 = rng.uniform(ranges.q2.lo, ranges.q2.hi);
    c.q3 = rng.uniform(ranges.q3.lo, ranges.q3.hi);
    c.alpha = rng.uniform(ranges.alpha.lo, ranges.alpha.hi);
    c.beta = rng.uniform(ranges.beta.lo, ranges.beta.hi);
    c.cycle_seconds = rng.uniform(ranges.cycle_seconds.lo, ranges.cycle_seconds.hi);
    c.gap_seconds = rng.uniform(ranges.gap_seconds.lo, ranges.gap_seconds.hi);
    c.noise_sd = rng.uniform(ranges.noise_sd.lo, ranges.noise_sd.hi);
    c.cycle_count = std::max(1, rng.poisson(ranges.cycle_mean));
    c.basis.startup = rng.coin(ranges.startup_prob);
    c.basis.second_order = rng.coin(ranges.second_order_prob);
    c.validate();
    out.push_back(c);
  }
  return out;
}

Dataset generate_dataset(const std::vector<LfCentroid>& centroids,
                         const GenConfig& cfg, ExecMode mode) {
  cfg.validate();
  for (const LfCentroid& c : centroids) c.validate();

  const std::int64_t n_app = static_cast<std::int64_t>(centroids.size());
  const std::int64_t per_app = cfg.signatures_per_appliance;
  const std::int64_t total = n_app * per_app;

  Dataset ds;
  ds.signatures.resize(total);
  std::exception_ptr failure;

  auto job = [&](std::int64_t j) {
    const int k = static_cast<int>(j / per_app);
    const int s = static_cast<int>(j % per_app);
    RngStream rng = derive_stream(cfg.master_seed, k, s);
    const SignaturePlan plan = plan_signature(centroids[k], cfg, rng);
    ds.signatures[j] = assemble_signature(plan, rng, k, s);
  };

  if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < total; ++j) {
      try {
        job(j);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    for (std::int64_t j = 0; j < total; ++j) job(j);
  }
  if (failure) std::rethrow_exception(failure);

  ds.manifest.kind = DatasetKind::lf;
  ds.manifest.config = cfg;
  ds.manifest.lf_centroids = centroids;
  return ds;
}

} // namespace sigsynth::lf
