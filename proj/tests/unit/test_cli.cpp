#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "kirchhoff/cli.hpp"
#include "kirchhoff/errors.hpp"

using namespace kirchhoff;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const char* root = std::getenv("KIRCHHOFF_TEST_TMP");
  fs::path dir = (root ? fs::path(root) : fs::temp_directory_path()) / ("cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

RunConfig solve_config(double b, const std::string& dir) {
  RunConfig cfg = config_from_settings(Subcommand::Solve, {{"b", std::to_string(b)},
                                                           {"lambda-factor", "0.5"},
                                                           {"m0", "25.59315018"},
                                                           {"grid-points", "80"}});
  cfg.outDir = scratch_dir(dir);
  return cfg;
}

}  // namespace

TEST_CASE("parse_exponent") {
  auto star = parse_exponent("2*", 3);
  CHECK(star.critical);
  CHECK(star.value == 6.0);

  auto frac = parse_exponent("10/3", 5);
  CHECK(frac.critical);
  CHECK(frac.value == critical_exponent(5));

  CHECK_FALSE(parse_exponent("4", 3).critical);
  CHECK(parse_exponent("4.5", 3).value == 4.5);
  CHECK(parse_exponent("7/2", 4).value == 3.5);
  CHECK(parse_exponent("6.0", 3).critical);

  CHECK_THROWS_AS(parse_exponent("7", 3), InvalidArgument);
  CHECK_THROWS_AS(parse_exponent("6.0000000000001", 3), InvalidArgument);
  CHECK_THROWS_AS(parse_exponent("five", 3), InvalidArgument);
  CHECK_THROWS_AS(parse_exponent("1/0", 3), InvalidArgument);
}

TEST_CASE("subcommand names") {
  for (auto cmd : {Subcommand::Solve, Subcommand::Scan, Subcommand::Limits, Subcommand::Classify, Subcommand::Oracle,
                   Subcommand::Constants}) {
    CHECK(parse_subcommand(to_string(cmd)) == cmd);
  }
  CHECK_FALSE(parse_subcommand("fit"));
}

TEST_CASE("key = value config") {
  std::istringstream in("# a comment\n a = 2 \n\nq=3 # trailing\np = 2*\n");
  const auto kv = parse_key_value(in);
  REQUIRE(kv.size() == 3);
  CHECK(kv[0] == std::pair<std::string, std::string>{"a", "2"});
  CHECK(kv[1].second == "3");
  CHECK(kv[2].second == "2*");

  std::istringstream twice("a = 1\na = 2\n");
  CHECK_THROWS_AS(parse_key_value(twice), InvalidArgument);
  std::istringstream noeq("a 1\n");
  CHECK_THROWS_AS(parse_key_value(noeq), InvalidArgument);

  RunConfig cfg;
  CHECK_THROWS_AS(apply_setting(cfg, "colour", "red"), InvalidArgument);
  CHECK_THROWS_AS(apply_setting(cfg, "a", "x1"), InvalidArgument);
  apply_setting(cfg, "tol-ode", "1e-9");
  CHECK(cfg.params.tol.odeRelative == 1e-9);
  CHECK(cfg.params.tol.odeRelativeCritical == 1e-9);
  for (const auto& key : config_keys()) CHECK(key.find('_') == std::string::npos);
}

TEST_CASE("resolve_params applies the factors") {
  RunConfig cfg = config_from_settings(Subcommand::Classify,
                                       {{"N", "4"}, {"p", "2*"}, {"a", "2"}, {"b", "0.01"}, {"lambda-factor", "0.5"},
                                        {"mu-factor", "2"}});
  const auto consts = spectral_constants(cfg.params.geom);
  const auto prm = resolve_params(cfg, consts);
  CHECK(prm.lambda == doctest::Approx(consts.lambda1));
  CHECK(prm.mu == doctest::Approx(0.02 * consts.sobolevS * consts.sobolevS));
  CHECK(prm.p == 4.0);
  const auto j = config_json(cfg, prm);
  CHECK(j["subcommand"] == "classify");
  CHECK(j.find("workers") == j.end());
}

TEST_CASE("run: constants") {
  RunConfig cfg;
  cfg.subcommand = Subcommand::Constants;
  cfg.outDir = scratch_dir("constants");
  std::ostringstream log;
  const auto res = run(cfg, log);
  REQUIRE(res.exitCode == kExitOk);
  const auto j = load(cfg.outDir / "constants.json");
  CHECK(j["constants"]["lambda1"].get<double>() == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-10));
  CHECK(j["tool"] == "kirchhoff");
}

TEST_CASE("run: exit codes") {
  std::ostringstream log;
  SUBCASE("classify on the lambda = a lambda1 boundary") {
    RunConfig cfg = config_from_settings(Subcommand::Classify, {{"lambda-factor", "1"}, {"m0", "25.59315018"}});
    cfg.outDir = scratch_dir("boundary");
    CHECK(run(cfg, log).exitCode == kExitUnsupported);
  }
  SUBCASE("invalid parameters") {
    RunConfig cfg = config_from_settings(Subcommand::Classify, {{"a", "-1"}});
    cfg.outDir = scratch_dir("invalid");
    const auto res = run(cfg, log);
    CHECK(res.exitCode == kExitUsage);
    CHECK_FALSE(res.message.empty());
  }
  SUBCASE("solve with 4 m0 b / mu > 1 below a lambda1 has no guaranteed root") {
    auto cfg = solve_config(0.01, "solve_b01");
    CHECK(run(cfg, log).exitCode == kExitUnsupported);
  }
}

TEST_CASE("run: solve") {
  auto cfg = solve_config(0.009, "solve");
  std::ostringstream log;
  const auto res = run(cfg, log);
  REQUIRE(res.exitCode == kExitOk);
  const auto j = load(cfg.outDir / "report.json");
  CHECK(j["result"]["numericCount"].get<int>() >= 1);
  CHECK(j["result"]["agreement"].get<bool>());
  CHECK(j["result"]["solutions"][0]["residual"].get<double>() <= 1e-6);
  CHECK(fs::exists(cfg.outDir / "profile_0.csv"));
  CHECK(slurp(cfg.outDir / "profile_0.csv").rfind("r,u,du\n", 0) == 0);
}

TEST_CASE("run: reports do not depend on the worker count") {
  std::string first;
  for (int workers : {1, 6}) {
    auto cfg = solve_config(0.009, "workers_" + std::to_string(workers));
    cfg.workers = workers;
    std::ostringstream log;
    REQUIRE(run(cfg, log).exitCode == kExitOk);
    const auto text = slurp(cfg.outDir / "report.json");
    if (first.empty()) {
      first = text;
    } else {
      CHECK(text == first);
    }
  }
}

TEST_CASE("run: scan and oracle files") {
  std::ostringstream log;
  RunConfig scan = config_from_settings(Subcommand::Scan, {{"b", "0.009"}, {"lambda-factor", "0.5"},
                                                           {"m0", "25.59315018"}, {"grid-points", "20"}});
  scan.outDir = scratch_dir("scan");
  REQUIRE(run(scan, log).exitCode == kExitOk);
  const auto csv = slurp(scan.outDir / "fscan.csv");
  CHECK(csv.rfind("alpha,D,f\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);

  RunConfig oracle = config_from_settings(Subcommand::Oracle, {{"oracle-grid", "200"}, {"oracle-points", "3"},
                                                               {"m0", "25.59315018"}, {"lambda-factor", "0.5"}});
  oracle.outDir = scratch_dir("oracle");
  REQUIRE(run(oracle, log).exitCode == kExitOk);
  const auto rows = slurp(oracle.outDir / "oracle.csv");
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 4);
}
