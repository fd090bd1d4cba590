#include "kirchhoff/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/variational.hpp"

namespace kirchhoff {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_integer(const std::string& s, long long& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

Json opt(const std::optional<double>& x) { return x && std::isfinite(*x) ? Json(*x) : Json(nullptr); }

Json header(const RunConfig& config, const ProblemParams& resolved) {
  Json j;
  j["tool"] = "kirchhoff";
  j["version"] = kVersion;
  j["schemaVersion"] = kSchemaVersion;
  j["subcommand"] = to_string(config.subcommand);
  j["config"] = config_json(config, resolved);
  return j;
}

double resolve_m0(const RunConfig& config, const ProblemParams& params) {
  if (config.m0) return *config.m0;
  if (params.is_critical()) return std::numeric_limits<double>::quiet_NaN();
  NehariOptions nopt;
  nopt.gridSize = config.oracleGrid;
  return ground_level_m0(params, nopt);
}

bool needs_lambda0(const ProblemParams& params) {
  return params.is_critical() && !params.q_is_two() && params.geom.dimension == 3;
}

std::optional<double> resolve_lambda0(const RunConfig& config, const ProblemParams& params, LocalSolver& solver,
                                      const SpectralConstants& consts) {
  if (!needs_lambda0(params)) return std::nullopt;
  if (config.lambda0) return config.lambda0;
  return estimate_lambda0(solver, consts);
}

std::optional<AlphaInterval> forced_interval(const RunConfig& config) {
  if (!config.intervalLower && !config.intervalUpper) return std::nullopt;
  if (!config.intervalLower || !config.intervalUpper) {
    throw InvalidArgument("interval-lower and interval-upper must be given together");
  }
  AlphaInterval iv;
  iv.lower = *config.intervalLower;
  iv.upper = *config.intervalUpper;
  iv.lowerLabel = "given";
  iv.upperLabel = "given";
  if (!(iv.lower >= 0.0) || !(iv.upper > iv.lower)) {
    throw InvalidArgument("the forced interval needs 0 <= interval-lower < interval-upper");
  }
  return iv;
}

void emit_file(RunResult& res, const RunConfig& config, const std::string& name, const std::string& content) {
  const auto path = config.outDir / name;
  write_atomic(path, content);
  res.written.push_back(path);
}

void run_constants(const RunConfig& config, RunResult& res, std::ostream& log) {
  config.params.geom.validate();
  const auto consts = spectral_constants(config.params.geom);
  Json j;
  j["tool"] = "kirchhoff";
  j["version"] = kVersion;
  j["schemaVersion"] = kSchemaVersion;
  j["subcommand"] = "constants";
  j["config"] = {{"N", config.params.geom.dimension}, {"R", config.params.geom.radius}};
  j["constants"] = to_json(consts, config.params.geom);
  emit_file(res, config, "constants.json", dump_json(j));
  log << "lambda1 = " << format_double(consts.lambda1) << "\nS = " << format_double(consts.sobolevS) << "\n";
}

void run_classify(const RunConfig& config, const ProblemParams& params, const SpectralConstants& consts,
                  RunResult& res, std::ostream& log) {
  const double m0 = resolve_m0(config, params);
  LocalSolver solver(params);
  const auto lambda0 = resolve_lambda0(config, params, solver, consts);
  const auto pred = classify(params, consts, m0, lambda0);
  Json j = header(config, params);
  j["m0"] = opt(m0);
  j["lambda0"] = opt(lambda0);
  j["prediction"] = to_json(pred);
  emit_file(res, config, "classify.json", dump_json(j));
  log << to_string(pred.caseInfo.id) << ": " << pred.matchedCase.value_or("-") << ", " << pred.guaranteedCount
      << " guaranteed solution(s)\n";
}

void run_solve(const RunConfig& config, const ProblemParams& params, const SpectralConstants& consts,
               RunResult& res, std::ostream& log) {
  const double m0 = resolve_m0(config, params);
  LocalSolver solver(params);
  RootSearchOptions ropt;
  ropt.gridPoints = config.gridPoints;
  ropt.alphaMin = config.alphaMin;
  ropt.alphaMax = config.alphaMax;
  ropt.forcedInterval = forced_interval(config);
  ropt.workers = config.workers;
  if (!ropt.forcedInterval) ropt.lambda0 = resolve_lambda0(config, params, solver, consts);
  const auto rep = find_roots(solver, params, consts, m0, ropt);

  Json j = header(config, params);
  j["m0"] = opt(m0);
  j["lambda0"] = opt(ropt.lambda0);
  j["constants"] = to_json(consts, params.geom);
  j["result"] = to_json(rep);
  emit_file(res, config, "report.json", dump_json(j));
  for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
    emit_file(res, config, "profile_" + std::to_string(i) + ".csv", profile_csv(rep.solutions[i].profile));
  }

  log << "interval (" << format_double(rep.interval.lower) << ", " << format_double(rep.interval.upper) << ")\n";
  for (const auto& r : rep.roots) {
    log << "root alpha = " << format_double(r.alpha) << (r.certified ? "" : " (not certified: " + r.note + ")")
        << "\n";
  }
  for (const auto& w : rep.warnings) log << "warning: " << w << "\n";
  if (rep.prediction) {
    log << rep.numericCount << " certified root(s), " << rep.prediction->guaranteedCount << " guaranteed\n";
  }
  if (!rep.agreement) {
    res.exitCode = kExitNumerical;
    res.message = "found fewer roots than the classification guarantees";
  }
}

void run_scan(const RunConfig& config, const ProblemParams& params, const SpectralConstants& consts,
              RunResult& res, std::ostream& log) {
  LocalSolver solver(params);
  RootSearchOptions ropt;
  ropt.alphaMin = config.alphaMin;
  ropt.alphaMax = config.alphaMax;
  AlphaInterval iv;
  if (auto forced = forced_interval(config)) {
    iv = *forced;
  } else {
    iv = describe_case(params, consts, resolve_lambda0(config, params, solver, consts)).interval;
  }
  const auto range = default_scan_range(iv, params, ropt);
  const auto grid = log_grid(range.lo, range.hi, config.gridPoints);
  const auto samples = sample_f(solver, params, grid, config.workers);
  emit_file(res, config, "fscan.csv", fscan_csv(samples));
  const auto failures = std::count_if(samples.begin(), samples.end(), [](const FSample& s) { return !s.f; });
  log << samples.size() << " samples on [" << format_double(range.lo) << ", " << format_double(range.hi) << "], "
      << failures << " failed\n";
}

void run_limits(const RunConfig& config, const ProblemParams& params, const SpectralConstants& consts,
                RunResult& res, std::ostream& log) {
  const double m0 = resolve_m0(config, params);
  LocalSolver solver(params);
  std::vector<Endpoint> ends;
  if (!(needs_lambda0(params))) ends.push_back(Endpoint::Lower);
  if (params.q_is_two()) ends.push_back(Endpoint::Upper);
  if (ends.empty()) {
    throw UnsupportedRegime("no endpoint limit is predicted for q > 2, p = 2* in dimension 3");
  }
  LimitOptions lopt;
  lopt.workers = config.workers;
  Json list = Json::array();
  bool failed = false;
  for (Endpoint e : ends) {
    const char* name = e == Endpoint::Lower ? "lower" : "upper";
    try {
      const auto rep = verify_limits(solver, e, params, consts, m0, lopt);
      Json item = to_json(rep);
      item["converged"] = true;
      item["error"] = nullptr;
      list.push_back(item);
      log << name << ": D -> " << format_double(rep.extrapolated) << " (predicted " << rep.predictedLabel << " = "
          << format_double(rep.predicted) << ")\n";
    } catch (const ConvergenceNotReached& ex) {
      failed = true;
      list.push_back({{"caseId", to_string(case_of(params))},
                      {"endpoint", name},
                      {"converged", false},
                      {"error", ex.what()}});
      log << name << ": " << ex.what() << "\n";
    }
  }
  Json j = header(config, params);
  j["m0"] = opt(m0);
  j["constants"] = to_json(consts, params.geom);
  j["limits"] = list;
  emit_file(res, config, "limits.json", dump_json(j));
  if (failed) {
    res.exitCode = kExitNumerical;
    res.message = "an endpoint extrapolation did not settle";
  }
}

void run_oracle(const RunConfig& config, const ProblemParams& params, const SpectralConstants& consts,
                RunResult& res, std::ostream& log) {
  LocalSolver solver(params);
  const double lo = config.alphaMin.value_or(0.1 * consts.lambda1);
  const double hi = config.alphaMax.value_or(0.9 * consts.lambda1);
  if (!(hi > lo) || config.oraclePoints < 1) {
    throw InvalidArgument("oracle needs alpha-min < alpha-max and at least one point");
  }
  std::vector<double> alphas;
  const int n = config.oraclePoints;
  for (int i = 0; i < n; ++i) alphas.push_back(n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1));
  NehariOptions nopt;
  nopt.gridSize = config.oracleGrid;
  const auto rows = oracle_compare(solver, alphas, nopt, 5.0e-3, config.workers);
  emit_file(res, config, "oracle.csv", oracle_csv(rows));
  const auto flagged = std::count_if(rows.begin(), rows.end(), [](const OracleRow& r) { return r.flagged; });
  log << rows.size() << " rows, " << flagged << " flagged\n";
}

}  // namespace

const char* to_string(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::Solve:
      return "solve";
    case Subcommand::Scan:
      return "scan";
    case Subcommand::Limits:
      return "limits";
    case Subcommand::Classify:
      return "classify";
    case Subcommand::Oracle:
      return "oracle";
    case Subcommand::Constants:
      return "constants";
  }
  return "?";
}

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  for (auto c : {Subcommand::Solve, Subcommand::Scan, Subcommand::Limits, Subcommand::Classify, Subcommand::Oracle,
                 Subcommand::Constants}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

ParsedExponent parse_exponent(const std::string& raw, int dimension) {
  if (dimension < 3) {
    throw InvalidArgument("dimension must be at least 3");
  }
  const std::string text = trim(raw);
  const long long n = dimension;
  if (text == "2*") {
    return {critical_exponent(dimension), true};
  }
  long long num = 0;
  long long den = 1;
  double value = 0.0;
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    if (!parse_integer(trim(text.substr(0, slash)), num) || !parse_integer(trim(text.substr(slash + 1)), den) ||
        den <= 0) {
      throw InvalidArgument("malformed exponent '" + raw + "'");
    }
    value = static_cast<double>(num) / static_cast<double>(den);
  } else {
    const auto dot = text.find('.');
    const std::string whole = text.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    const bool digits = !whole.empty() && std::all_of(text.begin(), text.end(), [](char c) {
      return (c >= '0' && c <= '9') || c == '.';
    });
    if (!digits || frac.size() > 17 || frac.find('.') != std::string::npos ||
        !parse_integer(whole + frac, num)) {
      throw InvalidArgument("malformed exponent '" + raw + "'");
    }
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    value = std::strtod(text.c_str(), nullptr);
  }
  const __int128 lhs = static_cast<__int128>(num) * (n - 2);
  const __int128 rhs = static_cast<__int128>(2 * n) * den;
  if (lhs > rhs) {
    throw InvalidArgument("exponent " + text + " exceeds 2N/(N-2) for N = " + std::to_string(dimension));
  }
  if (lhs == rhs) {
    return {critical_exponent(dimension), true};
  }
  return {value, false};
}

std::vector<std::pair<std::string, std::string>> parse_key_value(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(lineNo) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty() || !seen.insert(key).second) {
      throw InvalidArgument("config line " + std::to_string(lineNo) + ": empty or repeated key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot read config file " + path.string());
  }
  return parse_key_value(in);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "a",         "b",          "lambda",     "mu",           "q",              "p",
      "N",         "R",          "tol-ode",    "tol-root",     "grid-points",    "alpha-min",
      "alpha-max", "out",        "lambda0",    "m0",           "lambda-factor",  "mu-factor",
      "oracle-grid", "oracle-points", "interval-lower", "interval-upper"};
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  auto real = [&]() {
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw InvalidArgument("setting '" + key + "': '" + value + "' is not a number");
    }
    return x;
  };
  auto integer = [&]() {
    long long n = 0;
    if (!parse_integer(value, n)) {
      throw InvalidArgument("setting '" + key + "': '" + value + "' is not an integer");
    }
    return n;
  };
  auto& prm = cfg.params;
  if (key == "a") prm.a = real();
  else if (key == "b") prm.b = real();
  else if (key == "lambda") prm.lambda = real();
  else if (key == "mu") prm.mu = real();
  else if (key == "q") cfg.qText = value;
  else if (key == "p") cfg.pText = value;
  else if (key == "N") prm.geom.dimension = static_cast<int>(integer());
  else if (key == "R") prm.geom.radius = real();
  else if (key == "tol-ode") prm.tol.odeRelative = prm.tol.odeRelativeCritical = real();
  else if (key == "tol-root") prm.tol.root = real();
  else if (key == "grid-points") cfg.gridPoints = static_cast<int>(integer());
  else if (key == "alpha-min") cfg.alphaMin = real();
  else if (key == "alpha-max") cfg.alphaMax = real();
  else if (key == "out") cfg.outDir = value;
  else if (key == "lambda0") cfg.lambda0 = real();
  else if (key == "m0") cfg.m0 = real();
  else if (key == "lambda-factor") cfg.lambdaFactor = real();
  else if (key == "mu-factor") cfg.muFactor = real();
  else if (key == "oracle-grid") cfg.oracleGrid = static_cast<std::size_t>(std::max(0LL, integer()));
  else if (key == "oracle-points") cfg.oraclePoints = static_cast<int>(integer());
  else if (key == "interval-lower") cfg.intervalLower = real();
  else if (key == "interval-upper") cfg.intervalUpper = real();
  else throw InvalidArgument("unknown setting '" + key + "'");
}

RunConfig config_from_settings(Subcommand cmd, const std::vector<std::pair<std::string, std::string>>& settings) {
  RunConfig cfg;
  cfg.subcommand = cmd;
  for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
  return cfg;
}

ProblemParams resolve_params(const RunConfig& config, const SpectralConstants& consts) {
  ProblemParams p = config.params;
  const int n = p.geom.dimension;
  p.p = parse_exponent(config.pText, n).value;
  const auto q = parse_exponent(config.qText, n);
  if (q.critical) {
    throw InvalidArgument("q must be below the critical exponent");
  }
  p.q = q.value;
  if (config.lambdaFactor) p.lambda = *config.lambdaFactor * p.a * consts.lambda1;
  if (config.muFactor) p.mu = *config.muFactor * p.b * consts.sobolevS * consts.sobolevS;
  p.validate();
  return p;
}

Json config_json(const RunConfig& config, const ProblemParams& resolved) {
  Json j;
  j["subcommand"] = to_string(config.subcommand);
  j["a"] = resolved.a;
  j["b"] = resolved.b;
  j["lambda"] = resolved.lambda;
  j["mu"] = resolved.mu;
  j["qText"] = config.qText;
  j["q"] = resolved.q;
  j["pText"] = config.pText;
  j["p"] = resolved.p;
  j["N"] = resolved.geom.dimension;
  j["R"] = resolved.geom.radius;
  j["lambdaFactor"] = opt(config.lambdaFactor);
  j["muFactor"] = opt(config.muFactor);
  j["tolOde"] = resolved.tol.odeRelative;
  j["tolOdeCritical"] = resolved.tol.odeRelativeCritical;
  j["tolOdeAbsolute"] = resolved.tol.odeAbsolute;
  j["tolRadius"] = resolved.tol.radius;
  j["tolRoot"] = resolved.tol.root;
  j["gridPoints"] = config.gridPoints;
  j["alphaMin"] = opt(config.alphaMin);
  j["alphaMax"] = opt(config.alphaMax);
  j["intervalLower"] = opt(config.intervalLower);
  j["intervalUpper"] = opt(config.intervalUpper);
  j["lambda0"] = opt(config.lambda0);
  j["m0"] = opt(config.m0);
  j["oracleGrid"] = config.oracleGrid;
  j["oraclePoints"] = config.oraclePoints;
  return j;
}

int workers_from_env() {
  if (const char* env = std::getenv("KIRCHHOFF_WORKERS")) {
    long long n = 0;
    if (parse_integer(trim(env), n) && n >= 1) return static_cast<int>(std::min<long long>(n, 256));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RunResult run(const RunConfig& config, std::ostream& log) {
  RunResult res;
  try {
    std::filesystem::create_directories(config.outDir);
    if (config.subcommand == Subcommand::Constants) {
      run_constants(config, res, log);
      return res;
    }
    if (config.gridPoints < 2) {
      throw InvalidArgument("grid-points must be at least 2");
    }
    config.params.geom.validate();
    const auto consts = spectral_constants(config.params.geom);
    const auto params = resolve_params(config, consts);
    switch (config.subcommand) {
      case Subcommand::Solve:
        run_solve(config, params, consts, res, log);
        break;
      case Subcommand::Scan:
        run_scan(config, params, consts, res, log);
        break;
      case Subcommand::Limits:
        run_limits(config, params, consts, res, log);
        break;
      case Subcommand::Classify:
        run_classify(config, params, consts, res, log);
        break;
      case Subcommand::Oracle:
        run_oracle(config, params, consts, res, log);
        break;
      case Subcommand::Constants:
        break;
    }
  } catch (const UnsupportedRegime& e) {
    res.exitCode = kExitUnsupported;
    res.message = std::string("unsupported regime: ") + e.what();
  } catch (const InvalidArgument& e) {
    res.exitCode = kExitUsage;
    res.message = std::string("invalid input: ") + e.what();
  } catch (const std::exception& e) {
    res.exitCode = kExitNumerical;
    res.message = std::string("numerical failure: ") + e.what();
  }
  return res;
}

}  // namespace kirchhoff
