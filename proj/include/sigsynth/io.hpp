#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsynth/types.hpp"
#include "sigsynth/validation.hpp"

namespace sigsynth::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset CSV: header `appliance_id,signature_id,rate_hz,s0,...`, one
/// signature per row. Rows may have differing sample counts. Doubles are
/// printed with 17 significant digits so a round trip is bit-exact.
Dataset load_dataset_csv(const std::filesystem::path& path);

/// Writes the CSV plus a manifest sidecar at manifest_path_for(path).
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

Manifest load_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& m, const std::filesystem::path& path);

/// Centroid files share the manifest's centroid-array schema, so a manifest
/// also loads as a centroid file.
struct CentroidSet {
  DatasetKind kind = DatasetKind::external;
  std::vector<HfCentroid> hf;
  std::vector<LfCentroid> lf;
};

CentroidSet load_centroids(const std::filesystem::path& path);
void write_centroids(const CentroidSet& set, const std::filesystem::path& path);

void write_report(const validation::ValidationReport& report,
                  const std::filesystem::path& path);
void write_matches(const std::vector<validation::ApplianceMatch>& matches,
                   const std::filesystem::path& path);

/// Regenerates a dataset bit-for-bit from its manifest.
Dataset regenerate(const Manifest& m, ExecMode mode = ExecMode::parallel);

} // namespace sigsynth::io
