#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sector_blowup/angular.hpp"
#include "sector_blowup/evolve.hpp"
#include "sector_blowup/io.hpp"
#include "sector_blowup/presets.hpp"

using namespace sector_blowup;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const char* tag) {
  const fs::path p = fs::temp_directory_path() / (std::string("sbt_") + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& cwd) {
  const std::string cmd =
      "cd " + cwd.string() + " && " + SECTOR_BLOWUP_CLI + " " + args +
      " > cli_stdout.txt 2> cli_stderr.txt";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("theta field round trip preserves parity and bytes") {
  const auto dir = scratch_dir("theta");
  const auto grid = make_grid(M_PI / 4.0, 65);
  const auto f = ThetaField::sample(grid, Parity::Odd, [](double t) {
    return std::sin(2.0 * t) * (1.0 + 1e-15);
  });
  const auto path = (dir / "f.csv").string();
  write_theta_field(path, f);
  const auto g = read_theta_field(path);
  CHECK(g.parity() == Parity::Odd);
  CHECK(g.grid() == grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(g[i] == f[i]);

  // Determinism: identical content on rewrite.
  const std::string once = slurp(path);
  write_theta_field(path, g);
  CHECK(slurp(path) == once);
}

TEST_CASE("planar sample round trip") {
  const auto dir = scratch_dir("planar");
  PlanarSample s;
  s.alpha = 0.5;
  s.x1 = {0.0, 0.25, 1.0 / 3.0};
  s.x2 = {0.1, 0.2, 0.3};
  s.values = {1.0, -2.5, 3e-17};
  const auto path = (dir / "s.csv").string();
  write_planar_sample(path, s);
  const auto r = read_planar_sample(path, 0.5);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.x1[i] == s.x1[i]);
    CHECK(r.x2[i] == s.x2[i]);
    CHECK(r.values[i] == s.values[i]);
  }
}

TEST_CASE("diagnostics header is stable") {
  const auto dir = scratch_dir("diag");
  const auto grid = make_grid(M_PI / 4.0, 65);
  const auto pre = make_preset_1d("blowup_quadratic", grid);
  RunConfig cfg;
  cfg.t_end = 0.1;
  const auto res = run(init_state(pre.g0, pre.P0), cfg);
  const auto path = (dir / "d.csv").string();
  write_diagnostics(path, res.diagnostics);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header ==
        "t,dt,g_linf,g_l1,P_at_L,P_at_0,Gp_at_L,Gp_at_0,blowup_functional,"
        "min_g,min_gp,min_P,min_Pp,min_PplusPpp,balance_residual");
}

TEST_CASE("cli riccati example") {
  const auto dir = scratch_dir("cli_ric");
  const int rc = run_cli("riccati --c 1 --a0 0 --b0 1 --out r", dir);
  CHECK(rc == 2);  // blow-up is the successful scientific outcome
  const auto summary = nlohmann::json::parse(slurp(dir / "r" / "summary.json"));
  CHECK(summary["status"] == "blowup_detected");
  CHECK(std::fabs(summary["blowup_time"].get<double>() - 2.2214414) < 1e-5);
  CHECK(summary["invariant_maxdrift"].get<double>() < 1e-6);
  CHECK(fs::exists(dir / "r" / "trajectory.csv"));
}

TEST_CASE("cli sim1d completes a short run and honors the output root") {
  const auto dir = scratch_dir("cli_sim");
  setenv("SECTOR_BLOWUP_OUT", (dir / "root").c_str(), 1);
  const int rc = run_cli(
      "sim1d --angle pi/4 --grid 65 --preset blowup_quadratic --t-end 0.2 "
      "--stride 5 --out sim",
      dir);
  unsetenv("SECTOR_BLOWUP_OUT");
  CHECK(rc == 0);
  const fs::path out = dir / "root" / "sim";
  REQUIRE(fs::exists(out / "summary.json"));
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary["status"] == "completed");
  CHECK(std::fabs(summary["t_final"].get<double>() - 0.2) < 1e-9);
  CHECK(summary["blowup_estimate"].is_null());
  CHECK(fs::exists(out / "diagnostics.csv"));
  CHECK(fs::exists(out / "final_g.csv"));

  // Determinism: a repeat run produces byte-identical CSVs.
  const std::string diag = slurp(out / "diagnostics.csv");
  setenv("SECTOR_BLOWUP_OUT", (dir / "root2").c_str(), 1);
  run_cli(
      "sim1d --angle pi/4 --grid 65 --preset blowup_quadratic --t-end 0.2 "
      "--stride 5 --out sim",
      dir);
  unsetenv("SECTOR_BLOWUP_OUT");
  CHECK(slurp(dir / "root2" / "sim" / "diagnostics.csv") == diag);
}

TEST_CASE("cli corner-ode reports the blow-up") {
  const auto dir = scratch_dir("cli_cor");
  const int rc = run_cli(
      "corner-ode --beta 0.25 --a0 1 --b0 -1 --c0 1 --out c", dir);
  CHECK(rc == 2);
  const auto summary = nlohmann::json::parse(slurp(dir / "c" / "summary.json"));
  CHECK(std::fabs(summary["blowup_estimate"].get<double>() - 3.9915) < 1e-3);
  CHECK(summary["invariant_maxdrift"].get<double>() < 1e-6);
}

TEST_CASE("cli error paths") {
  const auto dir = scratch_dir("cli_err");
  CHECK(run_cli("sim1d --preset not_a_preset --t-end 0.1", dir) == 1);
  CHECK(run_cli("sim1d --angle pi/x --t-end 0.1", dir) == 1);
  CHECK(run_cli("not-a-subcommand", dir) != 0);
  CHECK(run_cli("verify --suite not_a_suite", dir) == 1);
}

TEST_CASE("cli verify single fast suite") {
  const auto dir = scratch_dir("cli_ver");
  const int rc = run_cli("verify --suite riccati_exact --out v", dir);
  CHECK(rc == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "v" / "summary.json"));
  CHECK(summary["status"] == "pass");
  CHECK(summary["suites"]["riccati_exact"] == true);
  const std::string stdout_text = slurp(dir / "cli_stdout.txt");
  CHECK(stdout_text.find("PASS riccati_exact") != std::string::npos);
}
