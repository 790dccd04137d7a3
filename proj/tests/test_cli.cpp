#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdt/commands.hpp"
#include "mdt/config.hpp"
#include "mdt/errors.hpp"

using namespace mdt;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mdt_cli_test_" + name);
  fs::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig base_config(const std::string& name) {
  RunConfig c;
  c.out = scratch(name);
  return c;
}

}  // namespace

TEST_CASE("config round trip and digest") {
  RunConfig c;
  c.family.base = "torus";
  c.family.dims = {4, 4};
  c.family.matrix = std::vector<std::vector<int>>{{0, 1}, {1, 0}};
  c.exact = "3/2";
  c.t_list = {-1, 0.5};
  c.bounds = {"hK", "upp1"};
  const auto j = c.to_json();
  const RunConfig back = RunConfig::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.digest() == c.digest());
  CHECK(c.digest().size() == 16);
  RunConfig d = c;
  d.seed = 99;
  CHECK(d.digest() != c.digest());
}

TEST_CASE("config validation") {
  nlohmann::json j = RunConfig{}.to_json();
  j["tolerance"] = 0.0;
  CHECK_THROWS_AS(RunConfig::from_json(j), InvalidArgument);
  j = RunConfig{}.to_json();
  j["bogus"] = 1;
  CHECK_THROWS_AS(RunConfig::from_json(j), InvalidArgument);
  j = RunConfig{}.to_json();
  j["grid"] = "1:0";
  CHECK_THROWS_AS(RunConfig::from_json(j), InvalidArgument);
  j = RunConfig{}.to_json();
  j["seed"] = "x";
  CHECK_THROWS_AS(RunConfig::from_json(j), InvalidArgument);
  CHECK(parse_grid("-1:1:3") == std::vector<double>{-1, 0, 1});
  CHECK(parse_grid("default").size() == 101);
  CHECK_THROWS_AS(parse_grid("a:b:c"), InvalidArgument);
}

TEST_CASE("family construction") {
  FamilySpec s;
  s.base = "cycle";
  s.dims = {4};
  s.connection = "shift:1";
  CHECK(build_family(s, 1).connection().permutation_image() == std::vector<std::size_t>{1, 2, 3, 0});
  s.connection = "perm:1,0,3,2";
  CHECK(build_family(s, 1).connection().is_permutation());
  s.connection = "even-odd";
  CHECK(build_family(s, 1).connection().ones() == 2);
  s.connection = "rows:1100;0110;0011;1001";
  CHECK(build_family(s, 1).connection().ones() == 8);
  s.connection = "zero";
  CHECK(build_family(s, 1).connection().is_zero());
  s.connection = "rows:010;100";
  CHECK_THROWS_AS(build_family(s, 1), InvalidArgument);
  s.connection = "perm:0,0,1,2";
  CHECK_THROWS_AS(build_family(s, 1), InvalidArgument);
  s.base = "complete-bipartite";
  s.dims = {3};
  s.connection = "identity";
  CHECK(build_family(s, 1).width() == 6);
  s.base = "nowhere";
  CHECK_THROWS_AS(build_family(s, 1), InvalidArgument);
}

TEST_CASE("sweep command") {
  RunConfig c = base_config("sweep");
  c.family.base = "vertex";
  c.family.dims = {};
  std::ostringstream log;
  const auto res = run_command("sweep", c, log);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.pass);
  const auto report = res.report();
  CHECK(report["command"] == "sweep");
  CHECK(report["config_digest"] == c.digest());
  CHECK(report["findings"].empty());
  CHECK(report["checks"]["density_matches_difference"] == true);
  const std::string csv = slurp(res.outputs.front());
  CHECK(csv.rfind("t,rho,P,p,h\n", 0) == 0);
  // Re-running gives byte-identical output.
  const auto again = run_command("sweep", c, log);
  CHECK(slurp(again.outputs.front()) == csv);
  CHECK(fs::exists(fs::path(c.out) / "sweep_report.json"));
}

TEST_CASE("sweep with exact root cross-check") {
  RunConfig c = base_config("sweep_exact");
  c.family.dims = {4};
  c.grid = "-1:1:5";
  c.exact = "3/2";
  std::ostringstream log;
  const auto res = run_command("sweep", c, log);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report()["checks"]["exact_root"] == true);
}

TEST_CASE("malformed connection is a usage error") {
  RunConfig c = base_config("bad");
  c.family.matrix = std::vector<std::vector<int>>{{0, 1, 0}, {1, 0, 0}};
  std::ostringstream log;
  const auto res = run_command("sweep", c, log);
  CHECK(res.exit_code == kExitUsage);
  CHECK_FALSE(res.pass);
}

TEST_CASE("oracle command") {
  std::ostringstream log;
  RunConfig c = base_config("oracle");
  c.n_values = {3};
  auto res = run_command("oracle", c, log);
  CHECK(res.exit_code == kExitOk);
  c.family.base = "vertex";
  c.family.dims = {};
  res = run_command("oracle", c, log);
  CHECK(res.report()["rows"][0]["trace"] == "4");
  CHECK(res.report()["rows"][0]["psi"] == "4");
  c.family.base = "cycle";
  c.family.dims = {4};
  c.family.connection = "perm:1,0,3,2";
  c.n_values = {4};
  c.exact = "3/2";
  res = run_command("oracle", c, log);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.pass);
}

TEST_CASE("check command") {
  std::ostringstream log;
  RunConfig c = base_config("check");
  c.family.dims = {4};
  c.family.mode = "permutation-bipartite";
  auto res = run_command("check", c, log);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report()["r"] == 4);
  CHECK(res.report()["connections"].size() == 6);

  RunConfig odd = base_config("check_odd");
  odd.family.dims = {5};
  res = run_command("check", odd, log);
  CHECK(res.exit_code == kExitUsage);
  CHECK(log.str().find("degree 4: 20") != std::string::npos);

  RunConfig irregular = base_config("check_irregular");
  irregular.family.connection = "rows:1100;0100;0010;0001";
  res = run_command("check", irregular, log);
  CHECK(res.exit_code == kExitUsage);
  CHECK(log.str().find("not regular") != std::string::npos);
}

TEST_CASE("maxpres command") {
  std::ostringstream log;
  RunConfig c = base_config("maxpres");
  c.family.dims = {6};
  c.family.mode = "permutation-bipartite";
  c.grid = "-4:4:17";
  const auto res = run_command("maxpres", c, log);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.pass);
  const std::string table = slurp((fs::path(c.out) / "maxpres.csv").string());
  CHECK(table.find("perm:0,1,2,3,4,5,0,") != std::string::npos);
  RunConfig bad = base_config("maxpres_bad");
  bad.family.connection = "rows:1100;0110;0011;1001";
  CHECK(run_command("maxpres", bad, log).exit_code == kExitUsage);
}

TEST_CASE("bounds command") {
  std::ostringstream log;
  RunConfig c = base_config("bounds");
  c.r = 4;
  c.bounds = {"ghl", "low1", "gh"};
  c.p_points = 11;
  const auto res = run_command("bounds", c, log);
  CHECK(res.exit_code == kExitOk);
  const std::string csv = slurp((fs::path(c.out) / "bounds_r4.csv").string());
  CHECK(csv.rfind("p,ghl,low1,gh\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 12);
  const std::string gp = slurp((fs::path(c.out) / "bounds_r4.gp").string());
  CHECK(gp.find("bounds_r4.csv") != std::string::npos);
  c.bounds = {"nope"};
  CHECK(run_command("bounds", c, log).exit_code == kExitUsage);
  c.r = 0;
  c.bounds = {"gh"};
  CHECK(run_command("bounds", c, log).exit_code == kExitUsage);
}
