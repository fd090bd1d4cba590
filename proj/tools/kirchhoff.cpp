#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kirchhoff/cli.hpp"
#include "kirchhoff/errors.hpp"

namespace {

using kirchhoff::RunConfig;

void add_run_options(CLI::App* sub, RunConfig& cfg, std::string& configPath) {
  auto& prm = cfg.params;
  sub->add_option("--config", configPath, "flat key = value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  sub->add_option("--a", prm.a, "coefficient a > 0")->capture_default_str();
  sub->add_option("--b", prm.b, "coefficient b > 0")->capture_default_str();
  sub->add_option("--lambda", prm.lambda, "coefficient lambda > 0")->capture_default_str();
  sub->add_option("--mu", prm.mu, "coefficient mu > 0")->capture_default_str();
  sub->add_option("--lambda-factor", cfg.lambdaFactor, "set lambda = factor * a * lambda1");
  sub->add_option("--mu-factor", cfg.muFactor, "set mu = factor * b * S^2");
  sub->add_option("--q", cfg.qText, "exponent q: decimal or n/d")->capture_default_str();
  sub->add_option("--p", cfg.pText, "exponent p: decimal, n/d or 2*")->capture_default_str();
  sub->add_option("--N", prm.geom.dimension, "dimension, at least 3")->capture_default_str();
  sub->add_option("--R", prm.geom.radius, "ball radius")->capture_default_str();
  sub->add_option_function<double>(
         "--tol-ode",
         [&prm](double t) {
           prm.tol.odeRelative = t;
           prm.tol.odeRelativeCritical = t;
         },
         "relative ODE tolerance (default 1e-10, 1e-12 for p = 2*)");
  sub->add_option("--tol-root", prm.tol.root, "target |f - 1| for root refinement")->capture_default_str();
  sub->add_option("--grid-points", cfg.gridPoints, "alpha grid size for solve and scan")->capture_default_str();
  sub->add_option("--alpha-min", cfg.alphaMin, "lower end of the scanned alpha range");
  sub->add_option("--alpha-max", cfg.alphaMax, "upper end of the scanned alpha range");
  sub->add_option("--interval-lower", cfg.intervalLower, "search this interval instead of the classified one");
  sub->add_option("--interval-upper", cfg.intervalUpper, "upper end of the forced interval");
  sub->add_option("--lambda0", cfg.lambda0, "lower end of the interval for q > 2, p = 2*, N = 3");
  sub->add_option("--m0", cfg.m0, "ground level of the pure power problem (skips its computation)");
  sub->add_option("--oracle-grid", cfg.oracleGrid, "Nehari grid size for m0 and the oracle")
      ->capture_default_str();
  sub->add_option("--oracle-points", cfg.oraclePoints, "alpha values compared by the oracle")
      ->capture_default_str();
  sub->add_option("--out", cfg.outDir, "output directory")->capture_default_str();
}

/// Fills options the command line left unset from the config file.
void apply_config(CLI::App* sub, const std::string& path) {
  for (const auto& [key, value] : kirchhoff::read_key_value_file(path)) {
    if (key == "config") {
      throw kirchhoff::InvalidArgument("config files cannot include other config files");
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw kirchhoff::InvalidArgument("unknown config key '" + key + "'");
    }
    if (opt->count() == 0) {
      opt->add_result(value);
      opt->run_callback();
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive radial solutions of a Kirchhoff problem on a ball"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kirchhoff::kVersion);

  RunConfig cfg;
  std::string configPath;
  const std::pair<kirchhoff::Subcommand, const char*> commands[] = {
      {kirchhoff::Subcommand::Solve, "find and certify all roots of f(alpha) = 1; writes report.json, profile_<i>.csv"},
      {kirchhoff::Subcommand::Scan, "sample D and f on the alpha grid; writes fscan.csv"},
      {kirchhoff::Subcommand::Limits, "extrapolate D at the interval endpoints; writes limits.json"},
      {kirchhoff::Subcommand::Classify, "evaluate the existence conditions; writes classify.json"},
      {kirchhoff::Subcommand::Oracle, "compare shooting with Nehari minimization; writes oracle.csv"},
      {kirchhoff::Subcommand::Constants, "lambda1, S and related constants; writes constants.json"},
  };
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(kirchhoff::to_string(cmd), help);
    add_run_options(sub, cfg, configPath);
    sub->callback([&cfg, cmd = cmd] { cfg.subcommand = cmd; });
  }

  try {
    app.parse(argc, argv);
    if (!configPath.empty()) {
      apply_config(app.get_subcommands().front(), configPath);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kirchhoff::kExitUsage;
  } catch (const kirchhoff::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kirchhoff::kExitUsage;
  }

  cfg.workers = kirchhoff::workers_from_env();
  const auto result = kirchhoff::run(cfg, std::cout);
  if (!result.message.empty()) {
    std::cerr << result.message << "\n";
  }
  return result.exitCode;
}
