// Exercises the installed command-line surface end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
  const char* bin = std::getenv("SIGSYNTH_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SIGSYNTH_BIN must point at the cli binary");
  return bin;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "sigsynth_cli_tests";
  fs::create_directories(dir);
  return dir;
}

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const fs::path log = work_dir() / "last_run.log";
  const std::string cmd = cli_binary() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log, std::ios::binary);
  RunResult res;
  res.code = status;
  res.output.assign(std::istreambuf_iterator<char>(in),
                    std::istreambuf_iterator<char>());
  return res;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

} // namespace

TEST_CASE("gen-hf writes one row per signature") {
  const fs::path out = work_dir() / "hf.csv";
  const RunResult res = run_cli(
      "gen-hf --seed 9 --appliances 4 --signatures-per-appliance 10 "
      "--cycles 2 --samples-per-cycle 128 --out " + out.string());
  CHECK(res.code == 0);
  const std::string text = read_text(out);
  CHECK(count_lines(text) == 41); // header + 4 * 10 rows
  CHECK(fs::exists(work_dir() / "hf.csv.manifest.json"));
}

TEST_CASE("gen-lf is run-to-run deterministic at the byte level") {
  const fs::path out1 = work_dir() / "lf1.csv";
  const fs::path out2 = work_dir() / "lf2.csv";
  const std::string flags =
      " --seed 31 --appliances 3 --signatures-per-appliance 4 --var-d 0.02 "
      "--p-b 0.5 --rate-hz 1 --out ";
  CHECK(run_cli("gen-lf" + flags + out1.string()).code == 0);
  CHECK(run_cli("gen-lf" + flags + out2.string()).code == 0);
  const std::string a = read_text(out1);
  CHECK(!a.empty());
  CHECK(a == read_text(out2));
}

TEST_CASE("gen-hf regenerates byte-identically from its manifest") {
  const fs::path out1 = work_dir() / "orig.csv";
  const fs::path out2 = work_dir() / "from_manifest.csv";
  CHECK(run_cli("gen-hf --seed 41 --appliances 2 --signatures-per-appliance 3 "
                "--cycles 2 --samples-per-cycle 128 --out " + out1.string())
            .code == 0);
  CHECK(run_cli("gen-hf --manifest " + out1.string() + ".manifest.json --out " +
                out2.string())
            .code == 0);
  CHECK(read_text(out1) == read_text(out2));
}

TEST_CASE("sample-centroids output feeds gen-lf directly") {
  const fs::path cent = work_dir() / "centroids.json";
  const fs::path out = work_dir() / "from_centroids.csv";
  CHECK(run_cli("sample-centroids --kind lf --seed 5 --appliances 3 --out " +
                cent.string())
            .code == 0);
  CHECK(run_cli("gen-lf --seed 6 --signatures-per-appliance 2 --centroids " +
                cent.string() + " --out " + out.string())
            .code == 0);
  CHECK(count_lines(read_text(out)) == 7); // header + 3 * 2 rows
}

TEST_CASE("validate against itself reports zero divergence") {
  const fs::path data = work_dir() / "self.csv";
  CHECK(run_cli("gen-hf --seed 13 --appliances 4 --signatures-per-appliance 10 "
                "--cycles 2 --samples-per-cycle 128 --out " + data.string())
            .code == 0);
  const fs::path report = work_dir() / "self_report.json";
  const RunResult res =
      run_cli("validate --real " + data.string() + " --synth " + data.string() +
              " --components 4 --bins 50 --out " + report.string());
  CHECK(res.code == 0);
  CHECK(res.output.find("mean D_KL") != std::string::npos);

  std::ifstream in(report);
  nlohmann::json j;
  in >> j;
  CHECK(j.at("n_components") == 4);
  CHECK(j.at("bins") == 50);
  for (double v : j.at("kl_per_component").get<std::vector<double>>()) {
    CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("match against itself pairs every appliance with itself") {
  const fs::path data = work_dir() / "match_self.csv";
  CHECK(run_cli("gen-hf --seed 17 --appliances 3 --signatures-per-appliance 2 "
                "--var-d 0 --cycles 2 --samples-per-cycle 128 --out " +
                data.string())
            .code == 0);
  const fs::path table = work_dir() / "matches.json";
  const RunResult res = run_cli("match --real " + data.string() + " --synth " +
                                data.string() + " --out " + table.string());
  CHECK(res.code == 0);

  std::ifstream in(table);
  nlohmann::json j;
  in >> j;
  for (const auto& row : j.at("matches")) {
    CHECK(row.at("synth_appliance") == row.at("real_appliance"));
    CHECK(std::abs(row.at("similarity").get<double>() - 1.0) < 1e-12);
  }
}

TEST_CASE("failures exit nonzero with a one-line diagnostic") {
  const RunResult res = run_cli("validate --real missing_a.csv --synth "
                                "missing_b.csv");
  CHECK(res.code != 0);
  CHECK(res.output.find("error:") != std::string::npos);
  CHECK(count_lines(res.output) == 1);
}

TEST_CASE("the kind of a centroid file must match the subcommand") {
  const fs::path cent = work_dir() / "hf_centroids.json";
  CHECK(run_cli("sample-centroids --kind hf --seed 5 --appliances 2 --out " +
                cent.string())
            .code == 0);
  const RunResult res =
      run_cli("gen-lf --centroids " + cent.string() + " --out " +
              (work_dir() / "mismatch.csv").string());
  CHECK(res.code != 0);
  CHECK(res.output.find("error:") != std::string::npos);
}
