#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "logdisp/scenarios.hpp"

using namespace logdisp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  const Config c = Config::parse_text(
      "scenario = wigner_moments\n"
      "# a comment\n"
      "[output]\n"
      "outdir = /tmp/x\n"
      "[wigner_moments]\n"
      "n_points = 256  # inline comment\n"
      "epsilon = 0.5\n");
  CHECK(c.get("", "scenario", "") == "wigner_moments");
  CHECK(c.get("output", "outdir", "") == "/tmp/x");
  CHECK(c.get_int("wigner_moments", "n_points", 0) == 256);
  CHECK(c.get_num("wigner_moments", "epsilon", 0.0) == 0.5);
  CHECK(c.get_num("wigner_moments", "missing", 7.5) == 7.5);
  CHECK_THROWS(Config::parse_text("key_without_value\n"));
  CHECK_THROWS(Config::parse_text("[unterminated\n"));
  CHECK(c.hash() == Config::parse_text(c.raw).hash());
}

TEST_CASE("scenario names are stable") {
  const auto& names = scenario_names();
  CHECK(names.size() == 6);
  CHECK(names[0] == "convergence_rate");
  CHECK(names[5] == "wigner_moments");
}

TEST_CASE("run_scenario exit codes and csv determinism") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "logdisp_cli_test";
  fs::create_directories(dir);
  const std::string cfg_path = (dir / "cfg.ini").string();
  spit(cfg_path,
       "scenario = wigner_moments\n[output]\noutdir = " + (dir / "out").string() +
           "\n[wigner_moments]\nn_points = 512\nhalf_width = 16\nepsilon = 0.5\n");
  CHECK(run_scenario(cfg_path) == 0);
  const std::string csv_path = (dir / "out" / "wigner_moments.csv").string();
  const std::string first = slurp(csv_path);
  CHECK(first.find("# config_hash=") == 0);
  CHECK(first.find("case_id,") != std::string::npos);
  CHECK(run_scenario(cfg_path) == 0);
  CHECK(slurp(csv_path) == first);  // byte-identical on repeated runs

  // unknown scenario and malformed config are config errors
  spit(cfg_path, "scenario = not_a_scenario\n");
  CHECK(run_scenario(cfg_path) == 1);
  spit(cfg_path, "scenario wigner_moments\n");
  CHECK(run_scenario(cfg_path) == 1);
  CHECK(run_scenario((dir / "missing.ini").string()) == 1);
  fs::remove_all(dir);
}

TEST_CASE("trend scenarios write csv and svg and exit clean") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "logdisp_cli_kie";
  fs::create_directories(dir);
  const std::string cfg_path = (dir / "cfg.ini").string();
  spit(cfg_path,
       "scenario = kie_gaussian\n[output]\noutdir = " + (dir / "out").string() +
           "\n[kie_gaussian]\nlambda = 1.0\nb0 = 0.2\nb1 = 0.1\n");
  CHECK(run_scenario(cfg_path) == 0);
  CHECK(fs::exists(dir / "out" / "kie_gaussian.csv"));
  CHECK(fs::exists(dir / "out" / "kie_gaussian.svg"));
  const std::string svg = slurp((dir / "out" / "kie_gaussian.svg").string());
  CHECK(svg.find("<svg xmlns=") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("fp_decay scenario certifies through the cli") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "logdisp_cli_fp";
  fs::create_directories(dir);
  const std::string cfg_path = (dir / "cfg.ini").string();
  spit(cfg_path, "scenario = fp_decay\n[output]\noutdir = " + (dir / "out").string() +
                     "\n[fp_decay]\nn_points = 256\n");
  CHECK(run_scenario(cfg_path) == 0);
  const std::string csv = slurp((dir / "out" / "fp_decay.csv").string());
  CHECK(csv.find("lhs_wn") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("outdir override via environment") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "logdisp_cli_env";
  fs::create_directories(dir);
  const std::string cfg_path = (dir / "cfg.ini").string();
  spit(cfg_path,
       "scenario = wigner_moments\n[output]\noutdir = " + (dir / "ignored").string() +
           "\n[wigner_moments]\nn_points = 512\n");
  setenv("LOGDISP_OUTDIR", (dir / "redirected").c_str(), 1);
  CHECK(run_scenario(cfg_path) == 0);
  unsetenv("LOGDISP_OUTDIR");
  CHECK(fs::exists(dir / "redirected" / "wigner_moments.csv"));
  CHECK(!fs::exists(dir / "ignored"));
  fs::remove_all(dir);
}

}  // TEST_SUITE
