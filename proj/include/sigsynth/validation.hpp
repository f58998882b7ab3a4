#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigsynth/types.hpp"

namespace sigsynth::validation {

/// Principal directions of a dataset. Components are unit-norm rows,
/// mutually orthogonal, ordered by decreasing explained variance; each
/// component's largest-magnitude entry is positive so fits are
/// reproducible.
struct PcaModel {
  std::vector<double> mean;
  std::vector<std::vector<double>> components;
  std::vector<double> explained_variance_ratio;

  std::size_t dim() const { return mean.size(); }
};

/// Per-component KL divergences between a real and a synthetic dataset.
struct ValidationReport {
  std::vector<double> kl_per_component;
  double mean_kl = 0.0;
  std::vector<double> explained_variance;
  int bins = 0;
  int n_components = 0;
};

/// Pads shorter signatures with zeros on the right and crops longer ones to
/// their first target_len samples.
Dataset standardize_lengths(const Dataset& ds, std::size_t target_len);

/// Scales every signature to unit max-absolute value (all-zero signatures
/// are left untouched).
Dataset normalize_amplitude(const Dataset& ds);

/// Top n_components principal directions of the mean-centered sample
/// matrix. Requires equal-length signatures, at least n_components + 1 of
/// them, and length >= n_components.
PcaModel pca_fit(const Dataset& ds, int n_components);

/// Centered inner products of every signature against each component.
std::vector<std::vector<double>> pca_project(const PcaModel& model,
                                             const Dataset& ds);

/// Per-component KL divergence D(P || Q) between histogram estimates of the
/// two projection sets. Bin edges span the joint min/max per component;
/// when Q has an empty bin where P has mass, Q is additively smoothed with
/// epsilon and renormalized. A component that is constant across both sets
/// has divergence 0.
std::vector<double> kl_per_component(
    const std::vector<std::vector<double>>& real_proj,
    const std::vector<std::vector<double>>& synth_proj, int bins,
    double epsilon = 1e-10);

/// Full comparison pipeline: amplitude normalization, length
/// standardization (target_len 0 picks the real dataset's maximum length),
/// PCA fit on the real dataset only, projection of both, per-component KL.
ValidationReport validate(const Dataset& real, const Dataset& synth,
                          int n_components = 6, int bins = 100,
                          std::size_t target_len = 0);

/// x . y / (|x| |y|); throws std::invalid_argument on length mismatch or a
/// zero vector.
double cosine_similarity(std::span<const double> x, std::span<const double> y);

struct ApplianceMatch {
  int synth_appliance = 0;
  int real_appliance = 0;
  double similarity = 0.0; ///< mean pairwise cosine similarity
};

/// For every synthetic appliance, the real appliance maximizing the mean
/// pairwise cosine similarity between their signatures; ties break toward
/// the lowest real appliance id. Lengths are standardized internally to the
/// longest signature across both datasets.
std::vector<ApplianceMatch> match_appliances(const Dataset& synth,
                                             const Dataset& real);

} // namespace sigsynth::validation
