#pragma once

// Finite-difference realization of the energy
//   I_alpha(v) = 1/2 |grad v|^2 - alpha/q |v|_q^q - 1/p |v|_p^p
// on a uniform radial grid, minimized over the Nehari set. Independent of the
// shooting pipeline and used to cross-check it.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/params.hpp"
#include "kirchhoff/shooting.hpp"

namespace kirchhoff {

/// Nodal values on r_i = i R / M, i = 0..M, with v_M = 0.
struct GridFunction {
  int dimension = 3;
  double radius = 1.0;
  std::vector<double> values;

  std::size_t intervals() const { return values.size() - 1; }
  double spacing() const { return radius / static_cast<double>(intervals()); }
  double node(std::size_t i) const { return spacing() * static_cast<double>(i); }

  /// The deterministic starting bump 1 - (r/R)^2 on M intervals.
  static GridFunction bump(int dimension, double radius, std::size_t intervals);
};

/// Discrete pieces of I_alpha: |grad v|^2 with midpoint weights r_{i+1/2}^{N-1},
/// and trapezoid sums of |v|^s r_i^{N-1}; all include omega_{N-1}.
struct DiscreteNorms {
  double gradSq = 0.0;
  double lqPower = 0.0;
  double lpPower = 0.0;
};

DiscreteNorms discrete_norms(const GridFunction& v, double q, double p);
double discrete_energy(const GridFunction& v, double alpha, double q, double p);

/// Exact gradient of discrete_energy with respect to v_0..v_{M-1} (entry M is 0).
std::vector<double> discrete_energy_gradient(const GridFunction& v, double alpha, double q, double p);

/// t v with t > 0 chosen so that t v lies on the discrete Nehari set.
/// Throws ProjectionUndefined when no such t exists (q = 2 and |grad v|^2 <= alpha |v|_2^2).
GridFunction nehari_project(const GridFunction& v, double alpha, double q, double p);

/// Scalar factor used by nehari_project.
double nehari_factor(const GridFunction& v, double alpha, double q, double p);

struct NehariOptions {
  std::size_t gridSize = 2000;
  int maxIterations = 20000;
  double stagnationTol = 1.0e-12;
  double armijo = 1.0e-4;
  double initialStep = 1.0;
};

struct EnergyReport {
  double alpha = 0.0;
  double mAlpha = 0.0;
  double gradNormSq = 0.0;
  double lqPower = 0.0;
  double lpPower = 0.0;
  /// |I'(u)u| / |grad u|^2 at the returned iterate.
  double nehariResidual = 0.0;
  int iterations = 0;
  bool converged = false;
  GridFunction profile;
};

class NehariNotConverged : public NotConverged {
 public:
  NehariNotConverged(const std::string& what, EnergyReport last) : NotConverged(what), last_(std::move(last)) {}
  const EnergyReport& last_iterate() const { return last_; }

 private:
  EnergyReport last_;
};

/// Projected descent on the Nehari set. Each step moves along the H^1_0 Riesz
/// representative of the discrete gradient (one tridiagonal solve), truncates
/// negative parts and re-projects; the step is backtracked from initialStep
/// by halving under an Armijo condition. Stops once the relative energy change
/// stays below stagnationTol.
EnergyReport minimize_nehari(double alpha, const ProblemParams& params, const NehariOptions& options = {});

/// m_0 of the pure power problem (alpha = 0).
double ground_level_m0(const ProblemParams& params, const NehariOptions& options = {});

struct OracleRow {
  double alpha = 0.0;
  std::optional<double> dShoot;
  std::optional<double> dOracle;
  std::optional<double> gap;  // |D_shoot - D_oracle| / D_oracle
  bool flagged = false;       // gap above threshold or either side missing
  std::string note;
};

std::vector<OracleRow> oracle_compare(LocalSolver& solver, std::span<const double> alphas,
                                      const NehariOptions& options = {}, double gap_threshold = 5.0e-3,
                                      int workers = 1);

}  // namespace kirchhoff
