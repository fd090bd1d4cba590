#pragma once

// Where the local problem is solvable in alpha, which parameter conditions
// guarantee one or two roots of f(alpha) = 1, and the numerical search for
// those roots.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kirchhoff/constants.hpp"
#include "kirchhoff/params.hpp"
#include "kirchhoff/scaling.hpp"
#include "kirchhoff/shooting.hpp"

namespace kirchhoff {

enum class CaseId { Q2_SUB, QGT2_SUB, Q2_CRIT, QGT2_CRIT };

const char* to_string(CaseId id);
CaseId case_of(const ProblemParams& params);

/// Open interval (lower, upper); upper may be +inf.
struct AlphaInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::string lowerLabel;  // "0", "lambda1/4", "lambda0"
  std::string upperLabel;  // "lambda1", "inf"

  bool contains(double alpha) const { return alpha > lower && alpha < upper; }
};

/// A named inequality lhs < rhs (or lhs <= rhs when inclusive), evaluated as written.
struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool inclusive = false;
  bool holds = false;
};

struct CaseDescriptor {
  CaseId id = CaseId::Q2_SUB;
  AlphaInterval interval;
  std::vector<Condition> radiality;
};

/// lambda0 is only needed for q > 2, p = 2*, N = 3.
CaseDescriptor describe_case(const ProblemParams& params, const SpectralConstants& consts,
                             std::optional<double> lambda0 = std::nullopt);

/// One-sided limit of f at an endpoint of the admissible interval, as the
/// endpoint analysis predicts it; +inf for blow-up, nullopt when only a bound is known.
struct EndpointLimit {
  std::optional<double> value;
  bool upperBound = false;  // value bounds the limit from above rather than equals it
};

struct AuxiliaryConstants {
  double m0 = std::numeric_limits<double>::quiet_NaN();
  double C = std::numeric_limits<double>::quiet_NaN();   // q = 2 subcritical Hoelder bound on D
  double C1 = std::numeric_limits<double>::quiet_NaN();  // 2q/(q-2) m0
  double C2 = std::numeric_limits<double>::quiet_NaN();  // lambda1 |B|^{2/N} S^{(N-2)/2} + S^{N/2}
  double C3 = std::numeric_limits<double>::quiet_NaN();  // 2q/(N(q-2)) S^{N/2}
  /// Left side of the two-root inequality of the current case (NaN when the case has none).
  double twoRootLhs = std::numeric_limits<double>::quiet_NaN();
  /// f at the lower endpoint of (lambda1/4, lambda1) for q = 2, p = 2*, N = 3, with lambda kept.
  double criticalN3Limit = std::numeric_limits<double>::quiet_NaN();
  /// The same limit in the form a/4 + b S^{3/2} / (2 mu^{1/2}), which assumes lambda = lambda1.
  double criticalN3LimitAsStated = std::numeric_limits<double>::quiet_NaN();
  /// a (l0/l)^{4/(6-q)} mu^{(q-2)/(6-q)} + b C3 (l0/l)^{2/(6-q)} mu^{(q-4)/(6-q)} for q > 2, p = 2*, N = 3.
  double lambda0Bound = std::numeric_limits<double>::quiet_NaN();
};

struct RegimePrediction {
  CaseDescriptor caseInfo;
  /// Label of the matched existence case, e.g. "p>4, lambda<a*lambda1".
  std::optional<std::string> matchedCase;
  std::vector<std::string> allMatches;
  int guaranteedCount = 0;
  AuxiliaryConstants aux;
  /// Every condition the classification evaluated, in order.
  std::vector<Condition> conditions;
  EndpointLimit lowerLimit;
  EndpointLimit upperLimit;
  /// Interior point with f < 1 separating the two roots (two-root cases only).
  std::optional<double> probeAlpha;
  /// The interior point as printed for the same case; differs from probeAlpha
  /// only for q > 2, p = 2*.
  std::optional<double> probeAlphaAsStated;
};

/// Relative closeness used to reject parameters on a boundary (lambda = a lambda1, mu = b S^2).
inline constexpr double kBoundaryTolerance = 1.0e-12;

/// Evaluates every enumerated condition for the parameters. m0 is the ground
/// level of the pure power problem; it is only used for p < 2*. Throws
/// UnsupportedRegime on a boundary or when no case matches.
RegimePrediction classify(const ProblemParams& params, const SpectralConstants& consts, double m0,
                          std::optional<double> lambda0 = std::nullopt);

/// Minimizer of the majorant a y^{(p-2)/(p-q)} + b c y^{(p-4)/(p-q)} mu^{2/(2-p)} of f,
/// where c bounds D, mapped back to alpha. Requires p < 4.
double majorant_probe(const ProblemParams& params, double dirichlet_bound);
/// Minimum value of the same majorant.
double majorant_minimum(const ProblemParams& params, double dirichlet_bound);

/// Limit of f as alpha approaches alpha_end (which may be 0) with D -> dirichlet.
double f_limit(double alpha_end, double dirichlet, const ProblemParams& params);

/// alpha above which the first term of f alone exceeds 1.
double alpha_first_term_bound(const ProblemParams& params);

struct FSample {
  double alpha = 0.0;
  std::optional<double> dirichlet;
  std::optional<double> f;
  std::string failure;
};

/// D and f at each alpha; shooting failures become gaps. Results are in grid order.
std::vector<FSample> sample_f(LocalSolver& solver, const ProblemParams& params, std::span<const double> grid,
                              int workers = 1);

std::vector<double> log_grid(double lo, double hi, int points);

struct RootSearchOptions {
  int gridPoints = 200;
  /// Overrides for the scanned range; otherwise derived from the interval.
  std::optional<double> alphaMin;
  std::optional<double> alphaMax;
  /// Skips classification and searches this interval instead.
  std::optional<AlphaInterval> forcedInterval;
  std::optional<double> lambda0;
  /// Lowest scanned alpha as a fraction of the upper scan end when the interval starts at 0.
  double lowerFraction = 1.0e-4;
  /// Extra points toward an endpoint while the sampled sign of f - 1 disagrees with the limit.
  int extendSteps = 12;
  int maxRefineIterations = 100;
  int workers = 1;
  ReconstructOptions reconstruct;
};

struct ScanRange {
  double lo = 0.0;
  double hi = 0.0;
  /// hi was set by alpha_first_term_bound rather than by the interval.
  bool capped = false;
};

/// The scanned part of the interval: just inside a finite upper endpoint or at
/// alpha_first_term_bound when that is lower; the lower end sits just inside a
/// positive endpoint or at lowerFraction * hi. Overrides from the options win.
ScanRange default_scan_range(const AlphaInterval& interval, const ProblemParams& params,
                             const RootSearchOptions& options);

struct RootInfo {
  double alpha = 0.0;
  double bracketLo = 0.0;
  double bracketHi = 0.0;
  int iterations = 0;
  double fMinusOne = 0.0;
  bool certified = false;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct RootReport {
  ProblemParams params;
  AlphaInterval interval;
  std::vector<FSample> samples;
  std::vector<RootInfo> roots;
  std::vector<KirchhoffSolution> solutions;  // one per certified root, same order
  std::optional<RegimePrediction> prediction;
  int numericCount = 0;
  bool agreement = false;
  /// Two-root cases: whether roots lie on both sides of the probe point.
  std::optional<bool> probeSeparates;
  std::vector<std::string> warnings;
};

/// Scans f - 1 on a log grid over the admissible interval, refines every sign
/// change and reconstructs the Kirchhoff solution for each root.
RootReport find_roots(LocalSolver& solver, const ProblemParams& params, const SpectralConstants& consts, double m0,
                      const RootSearchOptions& options = {});

enum class Endpoint { Lower, Upper };

struct LimitOptions {
  /// Approach sequence index range; defaults depend on the case and endpoint.
  std::optional<int> kFirst;
  std::optional<int> kLast;
  /// Allowed change between the last two extrapolants, relative to the reference scale.
  double cauchyTol = 1.0e-2;
  int workers = 1;
};

struct LimitPoint {
  int k = 0;
  double alpha = 0.0;
  std::optional<double> dirichlet;
  std::string failure;
};

struct LimitReport {
  CaseId caseId = CaseId::Q2_SUB;
  Endpoint endpoint = Endpoint::Upper;
  double endpointAlpha = 0.0;
  std::vector<LimitPoint> points;
  double extrapolated = 0.0;
  double previousExtrapolated = 0.0;
  double predicted = 0.0;
  std::string predictedLabel;
  /// Normalizer of relativeError: predicted, or D(lambda1/2) when the prediction is 0.
  double scale = 0.0;
  double relativeError = 0.0;
  /// f at the endpoint from the extrapolated D, against the predicted value of the limit.
  std::optional<double> fExtrapolated;
  std::optional<double> fPredicted;
};

/// Approaches the endpoint along a geometric sequence with ratio 1/2 and
/// extrapolates D with the last three successful values. Throws
/// ConvergenceNotReached when fewer than four values succeed or the last two
/// extrapolants differ by more than cauchyTol.
LimitReport verify_limits(LocalSolver& solver, Endpoint endpoint, const ProblemParams& params,
                          const SpectralConstants& consts, double m0, const LimitOptions& options = {});

struct HolderPoint {
  double alpha = 0.0;
  std::optional<double> dirichlet;
  double margin = 0.0;  // (C - D) / C
  bool satisfied = false;
};

struct HolderReport {
  double bound = 0.0;  // C
  double slack = 0.01;
  bool allSatisfied = false;
  double worstMargin = 0.0;
  std::vector<HolderPoint> points;
};

/// Checks D(alpha) <= (1 + slack) C on the grid (q = 2, p < 2*).
HolderReport holder_bound_check(LocalSolver& solver, const ProblemParams& params, const SpectralConstants& consts,
                                double m0, std::span<const double> grid, double slack = 0.01, int workers = 1);

/// Smallest alpha (to about 1e-3 relative) from which solve_local succeeds with
/// I_alpha(u_alpha) < S^{N/2} / N, found by a downward scan and bisection.
double estimate_lambda0(LocalSolver& solver, const SpectralConstants& consts);

}  // namespace kirchhoff
