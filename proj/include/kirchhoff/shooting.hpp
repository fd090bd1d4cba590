#pragma once

// Radial shooting for the local problem
//   -Lap u = alpha u^{q-1} + u^{p-1} in B_R,  u > 0,  u = 0 on the boundary,
// written as u'' + (N-1)/r u' + alpha u^{q-1} + u^{p-1} = 0, u(0) = beta, u'(0) = 0.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "kirchhoff/params.hpp"
#include "kirchhoff/profile.hpp"

namespace kirchhoff {

struct ShootingOptions {
  /// Integration stops without a zero at maxRadius, or at maxRadiusFactor * R when maxRadius is 0.
  double maxRadius = 0.0;
  double maxRadiusFactor = 2.0;
  /// Series start h = startFraction * min(R, local length scale of the central amplitude).
  double startFraction = 1.0e-6;
  double magnitudeBound = 1.0e150;
  /// Step cap for profiles that are kept, as a fraction of R (0 disables the cap).
  double profileMaxStepFactor = 1.0 / 500.0;
  /// Amplitude scan [betaMinFactor, betaMaxFactor] * beta_lin with beta_lin = R^{-2/(p-2)}.
  double betaMinFactor = 1.0e-3;
  double betaMaxFactor = 1.0e6;
  int scanPerDecade = 2;
  /// How many extra decades the scan may grow at either end when no bracket is seen.
  int expandDecades = 12;
};

struct FirstZero {
  double radius = 0.0;
  RadialProfile profile;  // empty unless requested; nodes end at the zero
};

struct NoZero {
  double reached = 0.0;
};

using ShotOutcome = std::variant<FirstZero, NoZero>;

/// Integrates the radial IVP from the regularized start at r = h. Throws
/// InvalidAmplitude for beta <= 0 and NonFiniteBlowup when the state leaves the
/// magnitude bound.
ShotOutcome shoot(double alpha, double beta, const ProblemParams& params, const ShootingOptions& options = {},
                  bool keep_profile = false);

struct LocalSolution {
  double alpha = 0.0;
  double amplitude = 0.0;
  RadialProfile profile;
  double dirichletEnergy = 0.0;  // D(alpha) = |grad u|_2^2
  double localEnergy = 0.0;      // I_alpha(u)
  double lqPower = 0.0;          // |u|_q^q
  double lpPower = 0.0;          // |u|_p^p
  /// Number of amplitude brackets seen in the scan; > 1 means several radial solutions.
  int bracketCount = 0;
  std::vector<double> alternateAmplitudes;
  std::vector<double> alternateEnergies;
};

/// Finds beta with r0(beta) = R by a geometric amplitude scan, bracket
/// expansion and bracketed refinement in log beta. When several brackets turn
/// up, the one with the smallest I_alpha is returned and the rest recorded.
/// Throws NoSolutionFound if no bracket exists.
LocalSolution solve_local(double alpha, const ProblemParams& params, const ShootingOptions& options = {});

/// I_alpha(u) = D/2 - alpha/q |u|_q^q - 1/p |u|_p^p.
double local_energy(double alpha, double q, double p, double dirichlet, double lq_power, double lp_power);

/// The local equation as seen by the residual check; dropping the power term
/// leaves the linear eigenvalue problem.
struct LocalEquation {
  int dimension = 3;
  double alpha = 0.0;
  double q = 2.0;
  double p = 4.0;
  bool powerTerm = true;
};

/// Max over sample radii of |u'' + (N-1)/r u' + alpha u^{q-1} + u^{p-1}| / (1 + alpha u^{q-1} + u^{p-1}),
/// with u'' obtained by a five-point difference of the interpolated u' inside a node interval.
double local_residual(const RadialProfile& profile, const LocalEquation& equation, int sample_count);
double local_residual(const LocalSolution& solution, const ProblemParams& params, int sample_count);

/// sign(u) |u|^e with exact fast paths for small integer e.
double signed_power(double u, double e);

/// Memoizes solve_local per alpha for a fixed local problem (q, p, N, R and
/// tolerances). Safe to call from several threads.
class LocalSolver {
 public:
  LocalSolver(const ProblemParams& params, ShootingOptions options = {});

  /// Returns the cached solution or computes it. Throws NoSolutionFound (also
  /// cached) when shooting fails.
  std::shared_ptr<const LocalSolution> solve(double alpha);

  /// Same as solve() but reports failures as an empty result plus message.
  std::shared_ptr<const LocalSolution> try_solve(double alpha, std::string* failure = nullptr);

  const ProblemParams& params() const { return params_; }
  const ShootingOptions& options() const { return options_; }
  std::size_t cache_size() const;

  /// True when the other parameter set shares q, p, N, R and tolerances.
  bool compatible_with(const ProblemParams& other) const;

 private:
  struct Entry {
    std::shared_ptr<const LocalSolution> solution;
    std::string failure;
  };

  ProblemParams params_;
  ShootingOptions options_;
  mutable std::mutex mutex_;
  std::map<double, Entry> cache_;
};

}  // namespace kirchhoff
