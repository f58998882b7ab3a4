// Test-only reference implementations, kept independent of the library code
// they check.
#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace oracles {

/// Brute-force inverse DFT of the Hermitian expansion of a one-sided
/// spectrum z[0..n]; returns the complex time series before any
/// normalization.
std::vector<std::complex<double>> inverse_dft_hermitian(
    const std::vector<std::complex<double>>& one_sided, std::size_t length);

/// Magnitude of the forward DFT of w at one bin.
double dft_bin_magnitude(const std::vector<double>& w, std::size_t bin);

/// Eigendecomposition of a symmetric matrix via cyclic Jacobi rotations.
/// Returns eigenvalues in descending order with matching unit eigenvectors.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<std::vector<double>> a);

/// Impulse response of q0 / (q1 s^2 + q2 s + q3) by RK4 integration of the
/// equivalent second-order ODE, sampled at npoints uniform times on
/// [0, t_max].
std::vector<double> rk4_impulse_response(double q0, double q1, double q2,
                                         double q3, double t_max,
                                         std::size_t npoints,
                                         std::size_t substeps = 64);

/// Histogram KL divergence between two sample sets over shared bin edges
/// spanning their joint range. Mirrors the reporting convention: the Q
/// histogram is additively smoothed and renormalized only when it has an
/// empty bin where P has mass.
double histogram_kl(const std::vector<double>& p_samples,
                    const std::vector<double>& q_samples, int bins,
                    double epsilon = 1e-10);

/// 99th percentile of histogram_kl between two fresh n-sample draws from
/// N(0, 1), over `reps` repetitions.
double same_distribution_kl_p99(int n, int bins, int reps, std::mt19937_64& gen);

} // namespace oracles
