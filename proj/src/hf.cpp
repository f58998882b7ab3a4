#include "sigsynth/hf.hpp"

#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sigsynth::hf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// log-normal density over the harmonic order, the spectrum's amplitude
// envelope
double harmonic_envelope(int order, double mu, double sigma) {
  const double li = std::log(static_cast<double>(order));
  const double z = (li - mu) / sigma;
  return std::exp(-0.5 * z * z) /
         (static_cast<double>(order) * sigma * std::sqrt(kTwoPi));
}

bool parity_dropped(int order, int parity, int dropout) {
  // the fundamental always survives
  return dropout == 1 && order > 1 && (order + parity) % 2 == 0;
}

} // namespace

double ar1_step(double prev, double rho, double eps, bool wrap_2pi) {
  double v = std::abs(rho * prev + eps);
  if (wrap_2pi) v = std::fmod(v, kTwoPi);
  return v;
}

SpectrumFrame build_spectrum_frame(const HfCentroid& c, const ArState& state) {
  const std::size_t n = static_cast<std::size_t>(c.harmonic_count);
  if (state.radius.size() != n || state.angle.size() != n) {
    throw std::invalid_argument(
        "build_spectrum_frame: AR state length must equal the harmonic count");
  }
  SpectrumFrame frame;
  frame.z.assign(n + 1, {0.0, 0.0});
  for (std::size_t i = 1; i <= n; ++i) {
    const int order = static_cast<int>(i);
    if (parity_dropped(order, c.parity, c.dropout)) continue;
    const double r = state.radius[i - 1];
    const double phi = state.angle[i - 1];
    double re = c.re0 + r * std::cos(phi);
    double im = c.im0 + r * std::sin(phi);
    im = -std::abs(im); // phase shift confined to the lower half plane
    const double env = harmonic_envelope(order, c.mu, c.sigma);
    frame.z[i] = {re * env, im * env};
  }
  return frame;
}

std::vector<double> synth_cycle(const SpectrumFrame& frame, double amplitude,
                                int samples) {
  if (frame.z.empty()) {
    throw std::invalid_argument("synth_cycle: empty spectrum frame");
  }
  const int n = static_cast<int>(frame.z.size()) - 1;
  if (!(amplitude > 0.0)) {
    throw std::invalid_argument("synth_cycle: amplitude must be positive");
  }
  if (samples < 2 * n || samples < 2) {
    throw std::invalid_argument(
        "synth_cycle: need at least two samples per harmonic");
  }

  const std::size_t len = static_cast<std::size_t>(samples);
  std::vector<double> cos_tab(len), sin_tab(len);
  for (std::size_t k = 0; k < len; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(len);
    cos_tab[k] = std::cos(theta);
    sin_tab[k] = std::sin(theta);
  }

  // Hermitian expansion of the one-sided spectrum: each harmonic i and its
  // mirror bin are conjugates, so the pair contributes 2(Re cos - Im sin)
  // and the result is exactly real. A harmonic on the Nyquist bin appears
  // once and only its real part is realizable. The 1/N transform factor
  // cancels in the normalization below.
  std::vector<double> w(len, 0.0);
  for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) {
    const double re = frame.z[i].real();
    const double im = frame.z[i].imag();
    if (re == 0.0 && im == 0.0) continue;
    if (2 * i == len) {
      for (std::size_t t = 0; t < len; ++t) {
        w[t] += re * cos_tab[(i * t) % len];
      }
    } else {
      for (std::size_t t = 0; t < len; ++t) {
        const std::size_t k = (i * t) % len;
        w[t] += 2.0 * (re * cos_tab[k] - im * sin_tab[k]);
      }
    }
  }

  double peak = 0.0;
  for (double v : w) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) {
    throw std::invalid_argument("synth_cycle: degenerate all-zero spectrum");
  }
  const double gain = amplitude / peak;
  for (double& v : w) v *= gain;
  return w;
}

double transient_multiplier(double peak_ratio, double tau, std::int64_t t) {
  return 1.0 + (peak_ratio - 1.0) * std::exp(-tau * static_cast<double>(t));
}

std::vector<double> apply_transient(std::vector<double> samples,
                                    double peak_ratio, double tau) {
  for (std::size_t t = 0; t < samples.size(); ++t) {
    samples[t] *= transient_multiplier(peak_ratio, tau,
                                       static_cast<std::int64_t>(t));
  }
  return samples;
}

Signature synth_signature(const HfCentroid& c, const GenConfig& cfg,
                          RngStream& rng, int appliance_id, int signature_id,
                          SynthTrace* trace) {
  c.validate();
  cfg.validate();
  const int n = c.harmonic_count;
  if (2 * n > cfg.samples_per_cycle) {
    throw std::invalid_argument(
        "synth_signature: samples_per_cycle must be at least twice the "
        "harmonic count");
  }
  const double sd = std::sqrt(cfg.diversity_var);

  double amplitude = rng.folded_normal(c.amplitude, cfg.diversity_var);

  ArState state;
  state.radius.resize(n);
  state.angle.resize(n);
  for (int i = 0; i < n; ++i) {
    state.radius[i] = std::abs(rng.normal(0.0, sd));
  }
  for (int i = 0; i < n; ++i) {
    state.angle[i] = std::fmod(std::abs(rng.normal(0.0, sd)), kTwoPi);
  }

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(cfg.cycles_per_signature) *
                  cfg.samples_per_cycle);
  for (int cyc = 0; cyc < cfg.cycles_per_signature; ++cyc) {
    for (int i = 0; i < n; ++i) {
      state.radius[i] = ar1_step(state.radius[i], c.rho, rng.normal(0.0, sd));
    }
    for (int i = 0; i < n; ++i) {
      state.angle[i] =
          ar1_step(state.angle[i], c.rho, rng.normal(0.0, sd), true);
    }
    if (cfg.correlated_amplitude) {
      // AR(1) with the noise mean shifted so the process reverts to the
      // centroid amplitude
      amplitude = ar1_step(amplitude, c.rho,
                           rng.normal(0.0, sd) + (1.0 - c.rho) * c.amplitude);
    }
    const SpectrumFrame frame = build_spectrum_frame(c, state);
    const std::vector<double> cycle =
        synth_cycle(frame, amplitude, cfg.samples_per_cycle);
    samples.insert(samples.end(), cycle.begin(), cycle.end());
    if (trace != nullptr) trace->cycle_amplitudes.push_back(amplitude);
  }

  samples = apply_transient(std::move(samples), c.peak_ratio, c.tau);

  Signature sig;
  sig.appliance_id = appliance_id;
  sig.signature_id = signature_id;
  sig.samples = std::move(samples);
  sig.rate_hz = kMainsHz * cfg.samples_per_cycle;
  return sig;
}

void CentroidRanges::validate() const {
  re0.validate("re0");
  im0.validate("im0");
  mu.validate("mu");
  sigma.validate("sigma");
  rho.validate("rho");
  amplitude.validate("amplitude");
  peak_ratio.validate("peak_ratio");
  tau.validate("tau");
  if (!(harmonic_mean > 0.0)) {
    throw std::invalid_argument("hf ranges: harmonic_mean must be positive");
  }
}

std::vector<HfCentroid> sample_centroids(int count, const CentroidRanges& ranges,
                                         RngStream& rng) {
  if (count < 0) throw std::invalid_argument("sample_centroids: count < 0");
  ranges.validate();
  std::vector<HfCentroid> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    HfCentroid c;
    c.re0 = rng.uniform(ranges.re0.lo, ranges.re0.hi);
    c.im0 = rng.uniform(ranges.im0.lo, ranges.im0.hi);
    c.mu = rng.uniform(ranges.mu.lo, ranges.mu.hi);
    c.sigma = rng.uniform(ranges.sigma.lo, ranges.sigma.hi);
    c.rho = rng.uniform(ranges.rho.lo, ranges.rho.hi);
    c.amplitude = rng.uniform(ranges.amplitude.lo, ranges.amplitude.hi);
    c.peak_ratio = rng.uniform(ranges.peak_ratio.lo, ranges.peak_ratio.hi);
    c.tau = rng.uniform(ranges.tau.lo, ranges.tau.hi);
    c.harmonic_count = std::max(1, rng.poisson(ranges.harmonic_mean));
    c.parity = rng.bit() ? 1 : 0;
    c.dropout = rng.bit() ? 1 : 0;
    c.validate();
    out.push_back(c);
  }
  return out;
}

Dataset generate_dataset(const std::vector<HfCentroid>& centroids,
                         const GenConfig& cfg, ExecMode mode) {
  cfg.validate();
  for (const HfCentroid& c : centroids) {
    c.validate();
    if (2 * c.harmonic_count > cfg.samples_per_cycle) {
      throw std::invalid_argument(
          "generate_dataset: samples_per_cycle must be at least twice every "
          "centroid's harmonic count");
    }
  }

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
    ds.signatures[j] = synth_signature(centroids[k], cfg, rng, k, s);
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

  ds.manifest.kind = DatasetKind::hf;
  ds.manifest.config = cfg;
  ds.manifest.hf_centroids = centroids;
  return ds;
}

} // namespace sigsynth::hf
