#include "sigsynth/types.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace sigsynth {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

} // namespace

void Range::validate(const std::string& name) const {
  require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi,
          "range " + name + ": lo must not exceed hi");
}

void HfCentroid::validate() const {
  require(harmonic_count >= 1, "hf centroid: harmonic_count must be >= 1");
  require(sigma > 0.0, "hf centroid: sigma must be positive");
  require(std::abs(rho) < 1.0, "hf centroid: |rho| must be < 1");
  require(amplitude > 0.0, "hf centroid: amplitude must be positive");
  require(peak_ratio >= 1.0, "hf centroid: peak_ratio must be >= 1");
  require(tau >= 0.0, "hf centroid: tau must be nonnegative");
  require(parity == 0 || parity == 1, "hf centroid: parity must be 0 or 1");
  require(dropout == 0 || dropout == 1, "hf centroid: dropout must be 0 or 1");
}

void LfCentroid::validate() const {
  require(amplitude >= 0.0 && peak_ratio >= 0.0 && tau >= 0.0 &&
              q0 >= 0.0 && q1 >= 0.0 && q2 >= 0.0 && q3 >= 0.0 &&
              alpha >= 0.0 && beta >= 0.0 && cycle_seconds >= 0.0 &&
              gap_seconds >= 0.0 && noise_sd >= 0.0,
          "lf centroid: parameters must be nonnegative");
  require(cycle_seconds > 0.0, "lf centroid: cycle_seconds must be positive");
  require(cycle_count >= 1, "lf centroid: cycle_count must be >= 1");
  require(!basis.second_order || q1 > 0.0,
          "lf centroid: q1 must be positive when the second-order factor is enabled");
}

void GenConfig::validate() const {
  require(diversity_var >= 0.0, "config: diversity_var must be nonnegative");
  require(samples_per_cycle >= 4, "config: samples_per_cycle must be >= 4");
  require(cycles_per_signature >= 1, "config: cycles_per_signature must be >= 1");
  require(lf_rate_hz > 0.0, "config: lf_rate_hz must be positive");
  require(beta_off_prob >= 0.0 && beta_off_prob <= 1.0,
          "config: beta_off_prob must be in [0, 1]");
  require(signatures_per_appliance >= 1,
          "config: signatures_per_appliance must be >= 1");
}

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::hf: return "hf";
    case DatasetKind::lf: return "lf";
    case DatasetKind::external: return "external";
  }
  throw std::invalid_argument("unknown dataset kind");
}

DatasetKind dataset_kind_from_string(const std::string& s) {
  if (s == "hf") return DatasetKind::hf;
  if (s == "lf") return DatasetKind::lf;
  if (s == "external") return DatasetKind::external;
  throw std::invalid_argument("unknown dataset kind: " + s);
}

void Dataset::validate() const {
  std::set<std::pair<int, int>> seen;
  std::set<int> appliances;
  for (const Signature& sig : signatures) {
    require(!sig.samples.empty(), "dataset: signature samples must be nonempty");
    require(sig.rate_hz > 0.0, "dataset: rate_hz must be positive");
    require(sig.appliance_id >= 0 && sig.signature_id >= 0,
            "dataset: ids must be nonnegative");
    for (double v : sig.samples) {
      require(std::isfinite(v), "dataset: samples must be finite");
    }
    require(seen.emplace(sig.appliance_id, sig.signature_id).second,
            "dataset: duplicate (appliance_id, signature_id) pair");
    appliances.insert(sig.appliance_id);
  }
  if (!appliances.empty()) {
    require(*appliances.begin() == 0 &&
                *appliances.rbegin() == static_cast<int>(appliances.size()) - 1,
            "dataset: appliance ids must form a contiguous 0-based range");
  }
}

} // namespace sigsynth
