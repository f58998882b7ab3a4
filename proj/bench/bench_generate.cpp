// Times the serial reference kernel against the OpenMP one for both
// generators and checks that the outputs are identical.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sigsynth/hf.hpp"
#include "sigsynth/lf.hpp"
#include "sigsynth/rng.hpp"

using namespace sigsynth;
using clock_type = std::chrono::steady_clock;

namespace {

bool datasets_identical(const Dataset& a, const Dataset& b) {
  if (a.signatures.size() != b.signatures.size()) return false;
  for (std::size_t i = 0; i < a.signatures.size(); ++i) {
    const Signature& x = a.signatures[i];
    const Signature& y = b.signatures[i];
    if (x.appliance_id != y.appliance_id || x.signature_id != y.signature_id ||
        x.rate_hz != y.rate_hz || x.samples != y.samples) {
      return false;
    }
  }
  return true;
}

template <typename Fn>
double time_seconds(Fn&& fn) {
  const auto t0 = clock_type::now();
  fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
  int appliances = 10;
  int signatures = 100;
  if (argc > 1) appliances = std::atoi(argv[1]);
  if (argc > 2) signatures = std::atoi(argv[2]);

  GenConfig cfg;
  cfg.master_seed = 42;
  cfg.signatures_per_appliance = signatures;
  cfg.cycles_per_signature = 10;
  cfg.samples_per_cycle = 500;
  cfg.diversity_var = 0.05;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("%d appliances x %d signatures, %d thread(s)\n\n", appliances,
              signatures, threads);
  std::printf("%-8s %-8s %10s %14s %9s %10s\n", "kernel", "mode", "time[s]",
              "signatures/s", "speedup", "identical");

  {
    RngStream rng = derive_stream(cfg.master_seed, 0, 0, StreamDomain::centroid);
    const auto centroids = hf::sample_centroids(appliances, {}, rng);
    Dataset serial, parallel;
    const double ts = time_seconds(
        [&] { serial = hf::generate_dataset(centroids, cfg, ExecMode::serial); });
    const double tp = time_seconds([&] {
      parallel = hf::generate_dataset(centroids, cfg, ExecMode::parallel);
    });
    const double total = static_cast<double>(serial.signatures.size());
    std::printf("%-8s %-8s %10.3f %14.0f %9s %10s\n", "hf", "serial", ts,
                total / ts, "1.0x", "-");
    std::printf("%-8s %-8s %10.3f %14.0f %8.1fx %10s\n", "hf", "openmp", tp,
                total / tp, ts / tp,
                datasets_identical(serial, parallel) ? "yes" : "NO");
  }

  {
    RngStream rng = derive_stream(cfg.master_seed, 0, 0, StreamDomain::centroid);
    const auto centroids = lf::sample_centroids(appliances, {}, rng);
    Dataset serial, parallel;
    const double ts = time_seconds(
        [&] { serial = lf::generate_dataset(centroids, cfg, ExecMode::serial); });
    const double tp = time_seconds([&] {
      parallel = lf::generate_dataset(centroids, cfg, ExecMode::parallel);
    });
    const double total = static_cast<double>(serial.signatures.size());
    std::printf("%-8s %-8s %10.3f %14.0f %9s %10s\n", "lf", "serial", ts,
                total / ts, "1.0x", "-");
    std::printf("%-8s %-8s %10.3f %14.0f %8.1fx %10s\n", "lf", "openmp", tp,
                total / tp, ts / tp,
                datasets_identical(serial, parallel) ? "yes" : "NO");
  }
  return 0;
}
