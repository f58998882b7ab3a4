#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "sigsynth/hf.hpp"
#include "sigsynth/io.hpp"
#include "sigsynth/lf.hpp"
#include "sigsynth/rng.hpp"
#include "sigsynth/types.hpp"
#include "sigsynth/validation.hpp"

namespace {

using namespace sigsynth;

void print_report(const validation::ValidationReport& report) {
  std::printf("KL divergence over principal components (%d bins)\n", report.bins);
  std::printf("  %-10s %-12s %s\n", "component", "D_KL", "explained_variance");
  for (int i = 0; i < report.n_components; ++i) {
    std::printf("  %-10d %-12.4f %.4f\n", i + 1, report.kl_per_component[i],
                report.explained_variance[i]);
  }
  std::printf("  mean D_KL  %.4f\n", report.mean_kl);
}

void print_matches(const std::vector<validation::ApplianceMatch>& matches) {
  std::printf("  %-16s %-16s %s\n", "synth_appliance", "real_appliance",
              "mean_cosine");
  for (const auto& m : matches) {
    std::printf("  %-16d %-16d %.6f\n", m.synth_appliance, m.real_appliance,
                m.similarity);
  }
}

struct GenArgs {
  GenConfig cfg;
  int appliances = 4;
  std::string centroids_path;
  std::string manifest_path;
  std::string out_path;
  bool serial = false;
};

void add_common_gen_options(CLI::App* cmd, GenArgs& args) {
  cmd->add_option("--seed", args.cfg.master_seed, "master seed");
  cmd->add_option("--appliances", args.appliances,
                  "number of appliances to sample when no centroid file is given");
  cmd->add_option("--signatures-per-appliance", args.cfg.signatures_per_appliance,
                  "signatures generated per appliance");
  cmd->add_option("--var-d", args.cfg.diversity_var,
                  "variance of the per-signature parameter scatter");
  cmd->add_option("--centroids", args.centroids_path,
                  "centroid file (or manifest) to generate from");
  cmd->add_option("--manifest", args.manifest_path,
                  "regenerate exactly from a manifest (ignores other options)");
  cmd->add_flag("--serial", args.serial, "use the serial reference kernel");
  cmd->add_option("--out", args.out_path, "output CSV path")->required();
}

int run_gen(const GenArgs& args, DatasetKind kind) {
  const ExecMode mode = args.serial ? ExecMode::serial : ExecMode::parallel;
  Dataset ds;
  if (!args.manifest_path.empty()) {
    const Manifest m = io::load_manifest(args.manifest_path);
    if (m.kind != kind) {
      throw io::IoError("manifest kind does not match the subcommand");
    }
    ds = io::regenerate(m, mode);
  } else if (!args.centroids_path.empty()) {
    const io::CentroidSet set = io::load_centroids(args.centroids_path);
    if (set.kind != kind) {
      throw io::IoError("centroid file kind does not match the subcommand");
    }
    ds = kind == DatasetKind::hf
             ? hf::generate_dataset(set.hf, args.cfg, mode)
             : lf::generate_dataset(set.lf, args.cfg, mode);
  } else {
    RngStream rng = derive_stream(args.cfg.master_seed, 0, 0, StreamDomain::centroid);
    if (kind == DatasetKind::hf) {
      const auto centroids = hf::sample_centroids(args.appliances, {}, rng);
      ds = hf::generate_dataset(centroids, args.cfg, mode);
    } else {
      const auto centroids = lf::sample_centroids(args.appliances, {}, rng);
      ds = lf::generate_dataset(centroids, args.cfg, mode);
    }
  }
  io::write_dataset_csv(ds, args.out_path);
  std::printf("wrote %zu signatures to %s (manifest: %s)\n",
              ds.signatures.size(), args.out_path.c_str(),
              io::manifest_path_for(args.out_path).string().c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"physics-based appliance load signature generator and dataset validator"};
  app.require_subcommand(1);

  GenArgs hf_args;
  CLI::App* gen_hf = app.add_subcommand(
      "gen-hf", "generate a waveform-rate (kHz) signature dataset");
  add_common_gen_options(gen_hf, hf_args);
  gen_hf->add_option("--cycles", hf_args.cfg.cycles_per_signature,
                     "mains cycles per signature");
  gen_hf->add_option("--samples-per-cycle", hf_args.cfg.samples_per_cycle,
                     "samples per mains cycle");

  GenArgs lf_args;
  CLI::App* gen_lf = app.add_subcommand(
      "gen-lf", "generate an RMS-rate (Hz) signature dataset");
  add_common_gen_options(gen_lf, lf_args);
  gen_lf->add_option("--p-b", lf_args.cfg.beta_off_prob,
                     "probability the beta factor is disabled per cycle");
  gen_lf->add_option("--rate-hz", lf_args.cfg.lf_rate_hz, "sampling rate");

  std::string sc_kind = "hf";
  std::uint64_t sc_seed = 1;
  int sc_appliances = 4;
  std::string sc_out;
  CLI::App* sample = app.add_subcommand(
      "sample-centroids", "draw a set of appliance centroids to a file");
  sample->add_option("--kind", sc_kind, "hf or lf")
      ->check(CLI::IsMember({"hf", "lf"}));
  sample->add_option("--seed", sc_seed, "master seed");
  sample->add_option("--appliances", sc_appliances, "number of centroids");
  sample->add_option("--out", sc_out, "output JSON path")->required();

  std::string v_real, v_synth, v_out;
  int v_components = 6, v_bins = 100;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "compare a synthetic dataset against a real one (PCA + KL)");
  validate_cmd->add_option("--real", v_real, "real dataset CSV")->required();
  validate_cmd->add_option("--synth", v_synth, "synthetic dataset CSV")->required();
  validate_cmd->add_option("--components", v_components, "principal components");
  validate_cmd->add_option("--bins", v_bins, "histogram bins");
  validate_cmd->add_option("--out", v_out, "report JSON path");

  std::string m_real, m_synth, m_out;
  CLI::App* match_cmd = app.add_subcommand(
      "match", "match each synthetic appliance to its most similar real one");
  match_cmd->add_option("--real", m_real, "real dataset CSV")->required();
  match_cmd->add_option("--synth", m_synth, "synthetic dataset CSV")->required();
  match_cmd->add_option("--out", m_out, "match table JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_hf->parsed()) return run_gen(hf_args, DatasetKind::hf);
    if (gen_lf->parsed()) return run_gen(lf_args, DatasetKind::lf);
    if (sample->parsed()) {
      RngStream rng = derive_stream(sc_seed, 0, 0, StreamDomain::centroid);
      io::CentroidSet set;
      set.kind = dataset_kind_from_string(sc_kind);
      if (set.kind == DatasetKind::hf) {
        set.hf = hf::sample_centroids(sc_appliances, {}, rng);
      } else {
        set.lf = lf::sample_centroids(sc_appliances, {}, rng);
      }
      io::write_centroids(set, sc_out);
      std::printf("wrote %d %s centroids to %s\n", sc_appliances, sc_kind.c_str(),
                  sc_out.c_str());
      return 0;
    }
    if (validate_cmd->parsed()) {
      const Dataset real = io::load_dataset_csv(v_real);
      const Dataset synth = io::load_dataset_csv(v_synth);
      const auto report = validation::validate(real, synth, v_components, v_bins);
      print_report(report);
      if (!v_out.empty()) {
        io::write_report(report, v_out);
        std::printf("wrote report to %s\n", v_out.c_str());
      }
      return 0;
    }
    if (match_cmd->parsed()) {
      const Dataset real = io::load_dataset_csv(m_real);
      const Dataset synth = io::load_dataset_csv(m_synth);
      const auto matches = validation::match_appliances(synth, real);
      print_matches(matches);
      if (!m_out.empty()) {
        io::write_matches(matches, m_out);
        std::printf("wrote match table to %s\n", m_out.c_str());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
