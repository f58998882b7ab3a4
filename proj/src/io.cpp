#include "sigsynth/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <utility>

#include "sigsynth/hf.hpp"
#include "sigsynth/lf.hpp"

namespace sigsynth::io {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    std::size_t line) {
  double v{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw IoError(path.string() + ":" + std::to_string(line) +
                  ": malformed numeric field '" + std::string(field) + "'");
  }
  return v;
}

long parse_int(std::string_view field, const std::filesystem::path& path,
               std::size_t line) {
  long v{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) +
                  ": malformed integer field '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

ordered_json config_to_json(const GenConfig& cfg) {
  ordered_json j;
  j["master_seed"] = cfg.master_seed;
  j["diversity_var"] = cfg.diversity_var;
  j["samples_per_cycle"] = cfg.samples_per_cycle;
  j["cycles_per_signature"] = cfg.cycles_per_signature;
  j["lf_rate_hz"] = cfg.lf_rate_hz;
  j["beta_off_prob"] = cfg.beta_off_prob;
  j["signatures_per_appliance"] = cfg.signatures_per_appliance;
  j["correlated_amplitude"] = cfg.correlated_amplitude;
  return j;
}

GenConfig config_from_json(const nlohmann::json& j) {
  GenConfig cfg;
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.diversity_var = j.at("diversity_var").get<double>();
  cfg.samples_per_cycle = j.at("samples_per_cycle").get<int>();
  cfg.cycles_per_signature = j.at("cycles_per_signature").get<int>();
  cfg.lf_rate_hz = j.at("lf_rate_hz").get<double>();
  cfg.beta_off_prob = j.at("beta_off_prob").get<double>();
  cfg.signatures_per_appliance = j.at("signatures_per_appliance").get<int>();
  cfg.correlated_amplitude = j.at("correlated_amplitude").get<bool>();
  return cfg;
}

ordered_json hf_centroid_to_json(const HfCentroid& c) {
  ordered_json j;
  j["harmonic_count"] = c.harmonic_count;
  j["re0"] = c.re0;
  j["im0"] = c.im0;
  j["mu"] = c.mu;
  j["sigma"] = c.sigma;
  j["parity"] = c.parity;
  j["dropout"] = c.dropout;
  j["rho"] = c.rho;
  j["amplitude"] = c.amplitude;
  j["peak_ratio"] = c.peak_ratio;
  j["tau"] = c.tau;
  return j;
}

HfCentroid hf_centroid_from_json(const nlohmann::json& j) {
  HfCentroid c;
  c.harmonic_count = j.at("harmonic_count").get<int>();
  c.re0 = j.at("re0").get<double>();
  c.im0 = j.at("im0").get<double>();
  c.mu = j.at("mu").get<double>();
  c.sigma = j.at("sigma").get<double>();
  c.parity = j.at("parity").get<int>();
  c.dropout = j.at("dropout").get<int>();
  c.rho = j.at("rho").get<double>();
  c.amplitude = j.at("amplitude").get<double>();
  c.peak_ratio = j.at("peak_ratio").get<double>();
  c.tau = j.at("tau").get<double>();
  return c;
}

ordered_json lf_centroid_to_json(const LfCentroid& c) {
  ordered_json j;
  j["amplitude"] = c.amplitude;
  j["peak_ratio"] = c.peak_ratio;
  j["tau"] = c.tau;
  j["q0"] = c.q0;
  j["q1"] = c.q1;
  j["q2"] = c.q2;
  j["q3"] = c.q3;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["cycle_seconds"] = c.cycle_seconds;
  j["gap_seconds"] = c.gap_seconds;
  j["cycle_count"] = c.cycle_count;
  j["noise_sd"] = c.noise_sd;
  j["use_startup"] = c.basis.startup;
  j["use_second_order"] = c.basis.second_order;
  return j;
}

LfCentroid lf_centroid_from_json(const nlohmann::json& j) {
  LfCentroid c;
  c.amplitude = j.at("amplitude").get<double>();
  c.peak_ratio = j.at("peak_ratio").get<double>();
  c.tau = j.at("tau").get<double>();
  c.q0 = j.at("q0").get<double>();
  c.q1 = j.at("q1").get<double>();
  c.q2 = j.at("q2").get<double>();
  c.q3 = j.at("q3").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.cycle_seconds = j.at("cycle_seconds").get<double>();
  c.gap_seconds = j.at("gap_seconds").get<double>();
  c.cycle_count = j.at("cycle_count").get<int>();
  c.noise_sd = j.at("noise_sd").get<double>();
  c.basis.startup = j.at("use_startup").get<bool>();
  c.basis.second_order = j.at("use_second_order").get<bool>();
  return c;
}

nlohmann::json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("format_version")) {
    throw IoError(path.string() + ": missing format_version");
  }
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw IoError(path.string() + ": unsupported format_version");
  }
  return j;
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

} // namespace

Dataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  Dataset ds;
  ds.manifest.kind = DatasetKind::external;

  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line.rfind("appliance_id,signature_id,rate_hz", 0) != 0) {
        throw IoError(path.string() + ":1: unexpected header");
      }
      saw_header = true;
      continue;
    }
    const std::vector<std::string_view> fields = split_csv(line);
    if (fields.size() < 4) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": row needs appliance_id, signature_id, rate_hz and at "
                    "least one sample");
    }
    Signature sig;
    sig.appliance_id = static_cast<int>(parse_int(fields[0], path, line_no));
    sig.signature_id = static_cast<int>(parse_int(fields[1], path, line_no));
    sig.rate_hz = parse_double(fields[2], path, line_no);
    sig.samples.reserve(fields.size() - 3);
    for (std::size_t i = 3; i < fields.size(); ++i) {
      sig.samples.push_back(parse_double(fields[i], path, line_no));
    }
    ds.signatures.push_back(std::move(sig));
  }
  if (!saw_header) throw IoError(path.string() + ": empty file");

  try {
    ds.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::size_t max_len = 0;
  for (const Signature& sig : ds.signatures) {
    max_len = std::max(max_len, sig.samples.size());
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  std::string row = "appliance_id,signature_id,rate_hz";
  for (std::size_t i = 0; i < max_len; ++i) {
    row += ",s" + std::to_string(i);
  }
  row += '\n';
  out << row;
  for (const Signature& sig : ds.signatures) {
    row.clear();
    row += std::to_string(sig.appliance_id);
    row += ',';
    row += std::to_string(sig.signature_id);
    row += ',';
    row += format_double(sig.rate_hz);
    for (double v : sig.samples) {
      row += ',';
      row += format_double(v);
    }
    row += '\n';
    out << row;
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
  write_manifest(ds.manifest, manifest_path_for(path));
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p += ".manifest.json";
  return p;
}

Manifest load_manifest(const std::filesystem::path& path) {
  const nlohmann::json j = parse_json_file(path);
  Manifest m;
  m.kind = dataset_kind_from_string(j.at("kind").get<std::string>());
  if (m.kind == DatasetKind::external) return m;
  m.config = config_from_json(j.at("config"));
  if (j.at("seed").get<std::uint64_t>() != m.config.master_seed) {
    throw IoError(path.string() + ": seed does not match config.master_seed");
  }
  for (const auto& cj : j.at("centroids")) {
    if (m.kind == DatasetKind::hf) {
      m.hf_centroids.push_back(hf_centroid_from_json(cj));
    } else {
      m.lf_centroids.push_back(lf_centroid_from_json(cj));
    }
  }
  return m;
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = to_string(m.kind);
  if (m.kind != DatasetKind::external) {
    j["seed"] = m.config.master_seed;
    j["config"] = config_to_json(m.config);
    ordered_json arr = ordered_json::array();
    if (m.kind == DatasetKind::hf) {
      for (const HfCentroid& c : m.hf_centroids) arr.push_back(hf_centroid_to_json(c));
    } else {
      for (const LfCentroid& c : m.lf_centroids) arr.push_back(lf_centroid_to_json(c));
    }
    j["centroids"] = std::move(arr);
  }
  write_text_file(j.dump(2) + "\n", path);
}

CentroidSet load_centroids(const std::filesystem::path& path) {
  const nlohmann::json j = parse_json_file(path);
  CentroidSet set;
  set.kind = dataset_kind_from_string(j.at("kind").get<std::string>());
  if (set.kind == DatasetKind::external || !j.contains("centroids")) {
    throw IoError(path.string() + ": no centroid array");
  }
  for (const auto& cj : j.at("centroids")) {
    if (set.kind == DatasetKind::hf) {
      set.hf.push_back(hf_centroid_from_json(cj));
    } else {
      set.lf.push_back(lf_centroid_from_json(cj));
    }
  }
  return set;
}

void write_centroids(const CentroidSet& set, const std::filesystem::path& path) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = to_string(set.kind);
  ordered_json arr = ordered_json::array();
  if (set.kind == DatasetKind::hf) {
    for (const HfCentroid& c : set.hf) arr.push_back(hf_centroid_to_json(c));
  } else if (set.kind == DatasetKind::lf) {
    for (const LfCentroid& c : set.lf) arr.push_back(lf_centroid_to_json(c));
  } else {
    throw IoError("write_centroids: kind must be hf or lf");
  }
  j["centroids"] = std::move(arr);
  write_text_file(j.dump(2) + "\n", path);
}

void write_report(const validation::ValidationReport& report,
                  const std::filesystem::path& path) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["n_components"] = report.n_components;
  j["bins"] = report.bins;
  j["kl_per_component"] = report.kl_per_component;
  j["mean_kl"] = report.mean_kl;
  j["explained_variance"] = report.explained_variance;
  write_text_file(j.dump(2) + "\n", path);
}

void write_matches(const std::vector<validation::ApplianceMatch>& matches,
                   const std::filesystem::path& path) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  ordered_json arr = ordered_json::array();
  for (const validation::ApplianceMatch& m : matches) {
    ordered_json row;
    row["synth_appliance"] = m.synth_appliance;
    row["real_appliance"] = m.real_appliance;
    row["similarity"] = m.similarity;
    arr.push_back(std::move(row));
  }
  j["matches"] = std::move(arr);
  write_text_file(j.dump(2) + "\n", path);
}

Dataset regenerate(const Manifest& m, ExecMode mode) {
  switch (m.kind) {
    case DatasetKind::hf:
      return hf::generate_dataset(m.hf_centroids, m.config, mode);
    case DatasetKind::lf:
      return lf::generate_dataset(m.lf_centroids, m.config, mode);
    case DatasetKind::external:
      break;
  }
  throw IoError("regenerate: manifest does not describe a generated dataset");
}

} // namespace sigsynth::io
