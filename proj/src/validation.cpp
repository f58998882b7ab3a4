#include "sigsynth/validation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sigsynth::validation {
namespace {

Eigen::MatrixXd to_matrix(const Dataset& ds, std::size_t expect_len) {
  const std::size_t rows = ds.signatures.size();
  Eigen::MatrixXd x(rows, expect_len);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::vector<double>& s = ds.signatures[r].samples;
    if (s.size() != expect_len) {
      throw std::invalid_argument(
          "pca: signatures must share one length (standardize first)");
    }
    for (std::size_t c = 0; c < expect_len; ++c) x(r, c) = s[c];
  }
  return x;
}

// flips a component so its largest-magnitude entry (first on ties) is
// positive
void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > best) {
      best = m;
      arg = i;
    }
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

} // namespace

Dataset standardize_lengths(const Dataset& ds, std::size_t target_len) {
  if (ds.signatures.empty()) {
    throw std::invalid_argument("standardize_lengths: empty dataset");
  }
  if (target_len < 1) {
    throw std::invalid_argument("standardize_lengths: target length must be >= 1");
  }
  Dataset out = ds;
  for (Signature& sig : out.signatures) {
    sig.samples.resize(target_len, 0.0);
  }
  return out;
}

Dataset normalize_amplitude(const Dataset& ds) {
  Dataset out = ds;
  for (Signature& sig : out.signatures) {
    double peak = 0.0;
    for (double v : sig.samples) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      for (double& v : sig.samples) v /= peak;
    }
  }
  return out;
}

PcaModel pca_fit(const Dataset& ds, int n_components) {
  if (n_components < 1) {
    throw std::invalid_argument("pca_fit: need at least one component");
  }
  const std::size_t n = ds.signatures.size();
  if (n < static_cast<std::size_t>(n_components) + 1) {
    throw std::invalid_argument("pca_fit: need at least n_components + 1 signatures");
  }
  const std::size_t dim = ds.signatures.front().samples.size();
  if (dim < static_cast<std::size_t>(n_components)) {
    throw std::invalid_argument("pca_fit: signature length below n_components");
  }

  Eigen::MatrixXd x = to_matrix(ds, dim);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  const double denom = static_cast<double>(n - 1);
  const double total_var = x.squaredNorm() / denom;
  if (!(total_var > 0.0)) {
    throw std::invalid_argument("pca_fit: dataset has zero variance");
  }

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + dim);
  model.components.reserve(n_components);
  model.explained_variance_ratio.reserve(n_components);

  const int k = n_components;
  if (dim <= n) {
    // covariance eigendecomposition
    const Eigen::MatrixXd cov = (x.adjoint() * x) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("pca_fit: eigendecomposition failed");
    }
    for (int j = 0; j < k; ++j) {
      const Eigen::Index col = static_cast<Eigen::Index>(dim) - 1 - j;
      const Eigen::VectorXd v = es.eigenvectors().col(col);
      std::vector<double> comp(v.data(), v.data() + dim);
      fix_sign(comp);
      model.components.push_back(std::move(comp));
      const double lambda = std::max(0.0, es.eigenvalues()(col));
      model.explained_variance_ratio.push_back(
          std::clamp(lambda / total_var, 0.0, 1.0));
    }
  } else {
    // wide data: eigendecompose the Gram matrix instead and map back
    const Eigen::MatrixXd gram = x * x.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("pca_fit: eigendecomposition failed");
    }
    const double lambda_max = es.eigenvalues()(static_cast<Eigen::Index>(n) - 1);
    for (int j = 0; j < k; ++j) {
      const Eigen::Index col = static_cast<Eigen::Index>(n) - 1 - j;
      const double lambda_gram = es.eigenvalues()(col);
      if (!(lambda_gram > 1e-12 * std::max(1.0, lambda_max))) {
        throw std::invalid_argument(
            "pca_fit: dataset rank is below the requested component count");
      }
      Eigen::VectorXd v = x.adjoint() * es.eigenvectors().col(col);
      v /= v.norm();
      std::vector<double> comp(v.data(), v.data() + dim);
      fix_sign(comp);
      model.components.push_back(std::move(comp));
      model.explained_variance_ratio.push_back(
          std::clamp(lambda_gram / denom / total_var, 0.0, 1.0));
    }
  }
  return model;
}

std::vector<std::vector<double>> pca_project(const PcaModel& model,
                                             const Dataset& ds) {
  const std::size_t dim = model.dim();
  const std::size_t k = model.components.size();
  std::vector<std::vector<double>> out;
  out.reserve(ds.signatures.size());
  for (const Signature& sig : ds.signatures) {
    if (sig.samples.size() != dim) {
      throw std::invalid_argument(
          "pca_project: signature length does not match the model dimension");
    }
    std::vector<double> y(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const std::vector<double>& comp = model.components[j];
      double acc = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        acc += (sig.samples[i] - model.mean[i]) * comp[i];
      }
      y[j] = acc;
    }
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<double> kl_per_component(
    const std::vector<std::vector<double>>& real_proj,
    const std::vector<std::vector<double>>& synth_proj, int bins,
    double epsilon) {
  if (real_proj.empty() || synth_proj.empty()) {
    throw std::invalid_argument("kl_per_component: projections must be nonempty");
  }
  if (bins < 2) {
    throw std::invalid_argument("kl_per_component: need at least two bins");
  }
  const std::size_t k = real_proj.front().size();
  if (k == 0 || synth_proj.front().size() != k) {
    throw std::invalid_argument("kl_per_component: component counts differ");
  }
  for (const auto& row : real_proj) {
    if (row.size() != k) {
      throw std::invalid_argument("kl_per_component: ragged projection rows");
    }
  }
  for (const auto& row : synth_proj) {
    if (row.size() != k) {
      throw std::invalid_argument("kl_per_component: ragged projection rows");
    }
  }

  std::vector<double> kl(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double lo = real_proj.front()[c];
    double hi = lo;
    for (const auto& row : real_proj) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    for (const auto& row : synth_proj) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    if (lo == hi) {
      kl[c] = 0.0; // constant in both sets
      continue;
    }

    const double width = hi - lo;
    auto histogram = [&](const std::vector<std::vector<double>>& rows) {
      std::vector<double> h(bins, 0.0);
      for (const auto& row : rows) {
        const double pos = (row[c] - lo) / width * bins;
        const int b = std::min(bins - 1, std::max(0, static_cast<int>(pos)));
        h[b] += 1.0;
      }
      const double total = static_cast<double>(rows.size());
      for (double& v : h) v /= total;
      return h;
    };
    const std::vector<double> p = histogram(real_proj);
    std::vector<double> q = histogram(synth_proj);

    // divergence is infinite where Q is empty but P is not; in that case
    // smooth Q additively and renormalize
    bool needs_smoothing = false;
    for (int b = 0; b < bins; ++b) {
      if (p[b] > 0.0 && q[b] == 0.0) {
        needs_smoothing = true;
        break;
      }
    }
    if (needs_smoothing) {
      const double norm = 1.0 + bins * epsilon;
      for (double& v : q) v = (v + epsilon) / norm;
    }

    double d = 0.0;
    for (int b = 0; b < bins; ++b) {
      if (p[b] > 0.0) d += p[b] * std::log(p[b] / q[b]);
    }
    kl[c] = d;
  }
  return kl;
}

ValidationReport validate(const Dataset& real, const Dataset& synth,
                          int n_components, int bins, std::size_t target_len) {
  if (real.signatures.empty() || synth.signatures.empty()) {
    throw std::invalid_argument("validate: datasets must be nonempty");
  }
  const Dataset real_norm = normalize_amplitude(real);
  const Dataset synth_norm = normalize_amplitude(synth);

  std::size_t len = target_len;
  if (len == 0) {
    for (const Signature& sig : real_norm.signatures) {
      len = std::max(len, sig.samples.size());
    }
  }
  const Dataset real_std = standardize_lengths(real_norm, len);
  const Dataset synth_std = standardize_lengths(synth_norm, len);

  const PcaModel model = pca_fit(real_std, n_components);
  const auto real_proj = pca_project(model, real_std);
  const auto synth_proj = pca_project(model, synth_std);

  ValidationReport report;
  report.kl_per_component = kl_per_component(real_proj, synth_proj, bins);
  report.explained_variance = model.explained_variance_ratio;
  report.bins = bins;
  report.n_components = n_components;
  double mean = 0.0;
  for (double v : report.kl_per_component) mean += v;
  report.mean_kl = mean / static_cast<double>(report.kl_per_component.size());
  return report;
}

double cosine_similarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cosine_similarity: length mismatch");
  }
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0) {
    throw std::invalid_argument(
        "cosine_similarity: undefined for a zero vector");
  }
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

std::vector<ApplianceMatch> match_appliances(const Dataset& synth,
                                             const Dataset& real) {
  if (synth.signatures.empty() || real.signatures.empty()) {
    throw std::invalid_argument("match_appliances: datasets must be nonempty");
  }
  std::size_t len = 0;
  for (const Signature& s : synth.signatures) len = std::max(len, s.samples.size());
  for (const Signature& s : real.signatures) len = std::max(len, s.samples.size());
  const Dataset synth_std = standardize_lengths(synth, len);
  const Dataset real_std = standardize_lengths(real, len);

  std::map<int, std::vector<const Signature*>> synth_groups, real_groups;
  for (const Signature& s : synth_std.signatures) {
    synth_groups[s.appliance_id].push_back(&s);
  }
  for (const Signature& s : real_std.signatures) {
    real_groups[s.appliance_id].push_back(&s);
  }

  std::vector<ApplianceMatch> matches;
  matches.reserve(synth_groups.size());
  for (const auto& [synth_id, synth_sigs] : synth_groups) {
    ApplianceMatch best{synth_id, -1, 0.0};
    for (const auto& [real_id, real_sigs] : real_groups) {
      double acc = 0.0;
      for (const Signature* a : synth_sigs) {
        for (const Signature* b : real_sigs) {
          acc += cosine_similarity(a->samples, b->samples);
        }
      }
      const double mean =
          acc / static_cast<double>(synth_sigs.size() * real_sigs.size());
      if (best.real_appliance < 0 || mean > best.similarity) {
        best.real_appliance = real_id;
        best.similarity = mean;
      }
    }
    matches.push_back(best);
  }
  return matches;
}

} // namespace sigsynth::validation
