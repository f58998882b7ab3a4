#include "sigsynth/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sigsynth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + uniform() * (hi - lo);
}

double RngStream::normal(double mean, double stddev) {
  // open on the low side so the log is finite
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  return mean + stddev * z;
}

double RngStream::folded_normal(double mean, double var) {
  if (var < 0.0) {
    throw std::invalid_argument("folded_normal: variance must be nonnegative");
  }
  return std::abs(normal(mean, std::sqrt(var)));
}

double RngStream::exponential() {
  const double u = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  return -std::log(u);
}

int RngStream::poisson(double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("poisson: lambda must be positive");
  }
  // count unit-rate arrivals before time lambda
  double t = exponential();
  int count = 0;
  while (t < lambda) {
    t += exponential();
    ++count;
  }
  return count;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("gamma: shape must be positive");
  }
  if (shape < 1.0) {
    const double u = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal(0.0, 1.0);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

double RngStream::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("beta: shapes must be positive");
  }
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t appliance_idx,
                        std::uint64_t signature_idx, StreamDomain domain) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ appliance_idx);
  h = mix64(h ^ signature_idx);
  h = mix64(h ^ static_cast<std::uint64_t>(domain));
  return RngStream(h);
}

} // namespace sigsynth
