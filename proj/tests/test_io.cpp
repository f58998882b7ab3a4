#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "sigsynth/hf.hpp"
#include "sigsynth/io.hpp"
#include "sigsynth/lf.hpp"
#include "sigsynth/rng.hpp"

using namespace sigsynth;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "sigsynth_io_tests";
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

Dataset small_hf_dataset(std::uint64_t seed = 3) {
  GenConfig cfg;
  cfg.master_seed = seed;
  cfg.signatures_per_appliance = 3;
  cfg.samples_per_cycle = 128;
  cfg.cycles_per_signature = 2;
  RngStream rng = derive_stream(seed, 0, 0, StreamDomain::centroid);
  const auto centroids = hf::sample_centroids(2, {}, rng);
  return hf::generate_dataset(centroids, cfg);
}

} // namespace

TEST_CASE("dataset csv round trip is bit exact") {
  const fs::path path = temp_dir() / "roundtrip.csv";
  const Dataset ds = small_hf_dataset();
  io::write_dataset_csv(ds, path);
  const Dataset loaded = io::load_dataset_csv(path);
  REQUIRE(loaded.signatures.size() == ds.signatures.size());
  for (std::size_t i = 0; i < ds.signatures.size(); ++i) {
    CHECK(loaded.signatures[i].appliance_id == ds.signatures[i].appliance_id);
    CHECK(loaded.signatures[i].signature_id == ds.signatures[i].signature_id);
    CHECK(loaded.signatures[i].rate_hz == ds.signatures[i].rate_hz);
    CHECK(loaded.signatures[i].samples == ds.signatures[i].samples);
  }
  CHECK(loaded.manifest.kind == DatasetKind::external);
}

TEST_CASE("csv loader accepts ragged rows") {
  const fs::path path = temp_dir() / "ragged.csv";
  write_text(path,
             "appliance_id,signature_id,rate_hz,s0,s1,s2\n"
             "0,0,1,1.5,2.5,3.5\n"
             "0,1,1,4.5\n");
  const Dataset ds = io::load_dataset_csv(path);
  REQUIRE(ds.signatures.size() == 2);
  CHECK(ds.signatures[0].samples.size() == 3);
  CHECK(ds.signatures[1].samples.size() == 1);
}

TEST_CASE("csv loader reports malformed fields with their line number") {
  const fs::path path = temp_dir() / "bad_field.csv";
  write_text(path,
             "appliance_id,signature_id,rate_hz,s0\n"
             "0,0,1,2.5\n"
             "0,1,1,oops\n");
  CHECK_THROWS_WITH_AS(io::load_dataset_csv(path),
                       doctest::Contains(":3:"), io::IoError);
}

TEST_CASE("csv loader rejects rows without samples") {
  const fs::path path = temp_dir() / "no_samples.csv";
  write_text(path,
             "appliance_id,signature_id,rate_hz,s0\n"
             "0,0,1\n");
  CHECK_THROWS_WITH_AS(io::load_dataset_csv(path),
                       doctest::Contains(":2:"), io::IoError);
}

TEST_CASE("csv loader rejects non-finite samples") {
  const fs::path path = temp_dir() / "nan.csv";
  write_text(path,
             "appliance_id,signature_id,rate_hz,s0\n"
             "0,0,1,nan\n");
  CHECK_THROWS_AS(io::load_dataset_csv(path), io::IoError);
}

TEST_CASE("csv loader rejects duplicate signature ids") {
  const fs::path path = temp_dir() / "dup.csv";
  write_text(path,
             "appliance_id,signature_id,rate_hz,s0\n"
             "0,0,1,2.5\n"
             "0,0,1,3.5\n");
  CHECK_THROWS_WITH_AS(io::load_dataset_csv(path),
                       doctest::Contains("duplicate"), io::IoError);
}

TEST_CASE("csv loader requires contiguous appliance ids") {
  const fs::path path = temp_dir() / "gap_ids.csv";
  write_text(path,
             "appliance_id,signature_id,rate_hz,s0\n"
             "0,0,1,2.5\n"
             "2,0,1,3.5\n");
  CHECK_THROWS_WITH_AS(io::load_dataset_csv(path),
                       doctest::Contains("contiguous"), io::IoError);
}

TEST_CASE("an empty dataset writes a header-only csv") {
  const fs::path path = temp_dir() / "empty.csv";
  Dataset ds;
  io::write_dataset_csv(ds, path);
  CHECK(read_text(path) == "appliance_id,signature_id,rate_hz\n");
  const Dataset loaded = io::load_dataset_csv(path);
  CHECK(loaded.signatures.empty());
}

TEST_CASE("manifest sidecar records the seed consistently") {
  const fs::path path = temp_dir() / "with_manifest.csv";
  const Dataset ds = small_hf_dataset(99);
  io::write_dataset_csv(ds, path);

  const fs::path mpath = io::manifest_path_for(path);
  REQUIRE(fs::exists(mpath));
  std::ifstream in(mpath);
  nlohmann::json j;
  in >> j;
  CHECK(j.at("format_version") == 1);
  CHECK(j.at("kind") == "hf");
  CHECK(j.at("seed").get<std::uint64_t>() ==
        j.at("config").at("master_seed").get<std::uint64_t>());
  CHECK(j.at("seed").get<std::uint64_t>() == 99);
}

TEST_CASE("a dataset is exactly regenerable from its manifest alone") {
  const fs::path path = temp_dir() / "regen.csv";
  const Dataset ds = small_hf_dataset(123);
  io::write_dataset_csv(ds, path);

  const Manifest m = io::load_manifest(io::manifest_path_for(path));
  const Dataset again = io::regenerate(m);
  REQUIRE(again.signatures.size() == ds.signatures.size());
  for (std::size_t i = 0; i < ds.signatures.size(); ++i) {
    CHECK(again.signatures[i].samples == ds.signatures[i].samples);
  }

  const fs::path path2 = temp_dir() / "regen2.csv";
  io::write_dataset_csv(again, path2);
  CHECK(read_text(path) == read_text(path2));
}

TEST_CASE("lf manifests regenerate too") {
  GenConfig cfg;
  cfg.master_seed = 5;
  cfg.signatures_per_appliance = 2;
  RngStream rng = derive_stream(5, 0, 0, StreamDomain::centroid);
  lf::CentroidRanges ranges;
  ranges.cycle_seconds = {3.0, 12.0};
  ranges.gap_seconds = {1.0, 5.0};
  const auto centroids = lf::sample_centroids(2, ranges, rng);
  const Dataset ds = lf::generate_dataset(centroids, cfg);

  const fs::path path = temp_dir() / "lf.csv";
  io::write_dataset_csv(ds, path);
  const Manifest m = io::load_manifest(io::manifest_path_for(path));
  CHECK(m.kind == DatasetKind::lf);
  const Dataset again = io::regenerate(m);
  REQUIRE(again.signatures.size() == ds.signatures.size());
  for (std::size_t i = 0; i < ds.signatures.size(); ++i) {
    CHECK(again.signatures[i].samples == ds.signatures[i].samples);
  }
}

TEST_CASE("centroid files round trip and share the manifest schema") {
  RngStream rng = derive_stream(7, 0, 0, StreamDomain::centroid);
  io::CentroidSet set;
  set.kind = DatasetKind::hf;
  set.hf = hf::sample_centroids(4, {}, rng);
  const fs::path path = temp_dir() / "centroids.json";
  io::write_centroids(set, path);

  const io::CentroidSet loaded = io::load_centroids(path);
  CHECK(loaded.kind == DatasetKind::hf);
  REQUIRE(loaded.hf.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(loaded.hf[i].re0 == set.hf[i].re0);
    CHECK(loaded.hf[i].harmonic_count == set.hf[i].harmonic_count);
    CHECK(loaded.hf[i].tau == set.hf[i].tau);
  }

  // a dataset manifest is also a valid centroid source
  const Dataset ds = small_hf_dataset(321);
  const fs::path csv = temp_dir() / "for_centroids.csv";
  io::write_dataset_csv(ds, csv);
  const io::CentroidSet from_manifest =
      io::load_centroids(io::manifest_path_for(csv));
  CHECK(from_manifest.kind == DatasetKind::hf);
  CHECK(from_manifest.hf.size() == ds.manifest.hf_centroids.size());
}

TEST_CASE("report and match tables serialize") {
  validation::ValidationReport report;
  report.kl_per_component = {0.1, 0.2};
  report.mean_kl = 0.15;
  report.explained_variance = {0.9, 0.05};
  report.bins = 100;
  report.n_components = 2;
  const fs::path rpath = temp_dir() / "report.json";
  io::write_report(report, rpath);
  std::ifstream rin(rpath);
  nlohmann::json rj;
  rin >> rj;
  CHECK(rj.at("mean_kl") == 0.15);
  CHECK(rj.at("kl_per_component").size() == 2);

  const fs::path mpath = temp_dir() / "matches.json";
  io::write_matches({{0, 3, 0.87}}, mpath);
  std::ifstream min(mpath);
  nlohmann::json mj;
  min >> mj;
  CHECK(mj.at("matches").at(0).at("real_appliance") == 3);
}

TEST_CASE("loading a missing file fails cleanly") {
  CHECK_THROWS_AS(io::load_dataset_csv(temp_dir() / "does_not_exist.csv"),
                  io::IoError);
  CHECK_THROWS_AS(io::load_manifest(temp_dir() / "does_not_exist.json"),
                  io::IoError);
}
