#pragma once

// Batch runs: one subcommand, one resolved parameter set, report files in an
// output directory.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kirchhoff/regime.hpp"
#include "kirchhoff/report.hpp"

namespace kirchhoff {

enum class Subcommand { Solve, Scan, Limits, Classify, Oracle, Constants };

const char* to_string(Subcommand cmd);
std::optional<Subcommand> parse_subcommand(const std::string& name);

/// Exponent given as a decimal, a fraction "n/d" or "2*". Returns the value
/// and whether it equals 2N/(N-2) exactly. Throws InvalidArgument when the
/// text is malformed or the exponent exceeds 2N/(N-2) (compared in integers).
struct ParsedExponent {
  double value = 0.0;
  bool critical = false;
};
ParsedExponent parse_exponent(const std::string& text, int dimension);

struct RunConfig {
  Subcommand subcommand = Subcommand::Solve;
  ProblemParams params;
  /// Exponent texts as given; p is re-parsed against N.
  std::string qText = "2";
  std::string pText = "4";
  /// lambda = lambdaFactor * a * lambda1 and mu = muFactor * b * S^2 when set.
  std::optional<double> lambdaFactor;
  std::optional<double> muFactor;
  std::filesystem::path outDir = ".";
  int gridPoints = 200;
  std::optional<double> alphaMin;
  std::optional<double> alphaMax;
  /// Searched instead of the classified interval when both ends are set.
  std::optional<double> intervalLower;
  std::optional<double> intervalUpper;
  std::optional<double> lambda0;
  /// Overrides the computed ground level of the pure power problem.
  std::optional<double> m0;
  std::size_t oracleGrid = 2000;
  int oraclePoints = 10;
  /// Not part of the report: results do not depend on it.
  int workers = 1;
};

/// key = value lines; '#' starts a comment, blank lines are skipped. Throws
/// InvalidArgument on a line without '=' or a repeated key.
std::vector<std::pair<std::string, std::string>> parse_key_value(std::istream& in);
std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::filesystem::path& path);

/// Keys accepted in a config file, equal to the long option names.
const std::vector<std::string>& config_keys();

/// Sets one config-file key on cfg. Throws InvalidArgument for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig config_from_settings(Subcommand cmd, const std::vector<std::pair<std::string, std::string>>& settings);

/// Parses p and q, applies the factors and validates. Throws InvalidArgument.
ProblemParams resolve_params(const RunConfig& config, const SpectralConstants& consts);

/// The config as embedded in every report.
Json config_json(const RunConfig& config, const ProblemParams& resolved);

/// Worker count from KIRCHHOFF_WORKERS, falling back to the hardware concurrency.
int workers_from_env();

struct RunResult {
  int exitCode = 0;
  std::vector<std::filesystem::path> written;
  std::string message;
};

/// Exit codes: 0 success, 1 invalid input, 2 unsupported regime, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUnsupported = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the subcommand, writing report files atomically into outDir and a
/// short summary to `log`. Library errors are mapped to exit codes.
RunResult run(const RunConfig& config, std::ostream& log);

}  // namespace kirchhoff
