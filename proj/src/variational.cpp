#include "kirchhoff/variational.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "kirchhoff/constants.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/parallel.hpp"

namespace kirchhoff {

namespace {

double midpoint_weight(const GridFunction& v, std::size_t i) {
  return std::pow((static_cast<double>(i) + 0.5) * v.spacing(), v.dimension - 1.0);
}

double node_weight(const GridFunction& v, std::size_t i) {
  return v.spacing() * std::pow(v.node(i), v.dimension - 1.0);
}

void check_grid(const GridFunction& v) {
  if (v.values.size() < 3) {
    throw InvalidArgument("grid function needs at least two intervals");
  }
  if (v.dimension < 3 || !(v.radius > 0.0)) {
    throw InvalidArgument("grid function needs dimension >= 3 and a positive radius");
  }
}

// Solves the discrete stiffness system K x = g on nodes 0..M-1 (x_M = 0).
std::vector<double> solve_stiffness(const GridFunction& v, std::span<const double> g) {
  const std::size_t m = v.intervals();
  const double omega = sphere_area(v.dimension);
  const double h = v.spacing();
  std::vector<double> diag(m), upper(m, 0.0), rhs(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double right = midpoint_weight(v, i);
    const double left = i > 0 ? midpoint_weight(v, i - 1) : 0.0;
    diag[i] = omega * (left + right) / h;
    if (i + 1 < m) {
      upper[i] = -omega * right / h;
    }
  }
  // Thomas algorithm; the matrix is symmetric so the sub-diagonal equals upper.
  for (std::size_t i = 1; i < m; ++i) {
    const double w = upper[i - 1] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(m + 1, 0.0);
  x[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  }
  return x;
}

}  // namespace

GridFunction GridFunction::bump(int dimension, double radius, std::size_t intervals) {
  GridFunction v{dimension, radius, std::vector<double>(intervals + 1)};
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(intervals);
    v.values[i] = 1.0 - s * s;
  }
  v.values.back() = 0.0;
  return v;
}

DiscreteNorms discrete_norms(const GridFunction& v, double q, double p) {
  check_grid(v);
  const std::size_t m = v.intervals();
  const double h = v.spacing();
  DiscreteNorms out;
  for (std::size_t i = 0; i < m; ++i) {
    const double slope = (v.values[i + 1] - v.values[i]) / h;
    out.gradSq += slope * slope * midpoint_weight(v, i) * h;
  }
  for (std::size_t i = 1; i < m; ++i) {
    const double w = node_weight(v, i);
    const double a = std::fabs(v.values[i]);
    out.lqPower += w * std::pow(a, q);
    out.lpPower += w * std::pow(a, p);
  }
  const double omega = sphere_area(v.dimension);
  out.gradSq *= omega;
  out.lqPower *= omega;
  out.lpPower *= omega;
  return out;
}

double discrete_energy(const GridFunction& v, double alpha, double q, double p) {
  const auto n = discrete_norms(v, q, p);
  return local_energy(alpha, q, p, n.gradSq, n.lqPower, n.lpPower);
}

std::vector<double> discrete_energy_gradient(const GridFunction& v, double alpha, double q, double p) {
  check_grid(v);
  const std::size_t m = v.intervals();
  const double h = v.spacing();
  const double omega = sphere_area(v.dimension);
  std::vector<double> g(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double lap = (v.values[i] - v.values[i + 1]) * midpoint_weight(v, i);
    if (i > 0) {
      lap += (v.values[i] - v.values[i - 1]) * midpoint_weight(v, i - 1);
    }
    const double w = node_weight(v, i);
    const double x = v.values[i];
    g[i] = omega * (lap / h - w * (alpha * signed_power(x, q - 1.0) + signed_power(x, p - 1.0)));
  }
  return g;
}

double nehari_factor(const GridFunction& v, double alpha, double q, double p) {
  const auto n = discrete_norms(v, q, p);
  if (!(n.lpPower > 0.0)) {
    throw ProjectionUndefined("Nehari projection of the zero function");
  }
  if (std::fabs(q - 2.0) < 1e-12) {
    const double excess = n.gradSq - alpha * n.lqPower;
    if (!(excess > 0.0)) {
      throw ProjectionUndefined("|grad v|^2 - alpha |v|_2^2 <= 0, no Nehari rescaling exists");
    }
    return std::pow(excess / n.lpPower, 1.0 / (p - 2.0));
  }
  // alpha t^{q-2} |v|_q^q + t^{p-2} |v|_p^p = |grad v|^2 has one root in t > 0 when alpha >= 0.
  auto eq = [&](double log_t) {
    const double t = std::exp(log_t);
    return alpha * std::pow(t, q - 2.0) * n.lqPower + std::pow(t, p - 2.0) * n.lpPower - n.gradSq;
  };
  double lo = -1.0, hi = 1.0;
  for (int k = 0; k < 200 && eq(lo) > 0.0; ++k) lo -= 2.0;
  for (int k = 0; k < 200 && eq(hi) < 0.0; ++k) hi += 2.0;
  const double flo = eq(lo), fhi = eq(hi);
  if (!(flo <= 0.0 && fhi >= 0.0)) {
    throw ProjectionUndefined("could not bracket the Nehari factor");
  }
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-14; };
  const auto [a, b] = boost::math::tools::toms748_solve(eq, lo, hi, flo, fhi, tol, iters);
  return std::exp(0.5 * (a + b));
}

GridFunction nehari_project(const GridFunction& v, double alpha, double q, double p) {
  const double t = nehari_factor(v, alpha, q, p);
  GridFunction out = v;
  for (double& x : out.values) {
    x *= t;
  }
  return out;
}

EnergyReport minimize_nehari(double alpha, const ProblemParams& params, const NehariOptions& options) {
  params.geom.validate();
  const double q = params.q;
  const double p = params.p;
  if (options.gridSize < 2) {
    throw InvalidArgument("Nehari minimization needs at least two grid intervals");
  }

  GridFunction v = nehari_project(GridFunction::bump(params.geom.dimension, params.geom.radius, options.gridSize),
                                  alpha, q, p);
  double energy = discrete_energy(v, alpha, q, p);
  const double first_energy = energy;

  auto make_report = [&](int iterations, bool converged) {
    EnergyReport rep;
    rep.alpha = alpha;
    const auto n = discrete_norms(v, q, p);
    rep.gradNormSq = n.gradSq;
    rep.lqPower = n.lqPower;
    rep.lpPower = n.lpPower;
    rep.mAlpha = local_energy(alpha, q, p, n.gradSq, n.lqPower, n.lpPower);
    rep.nehariResidual = std::fabs(n.gradSq - alpha * n.lqPower - n.lpPower) / n.gradSq;
    rep.iterations = iterations;
    rep.converged = converged;
    rep.profile = v;
    return rep;
  };

  int stalls = 0;
  for (int it = 1; it <= options.maxIterations; ++it) {
    const std::vector<double> grad = discrete_energy_gradient(v, alpha, q, p);
    const std::vector<double> dir = solve_stiffness(v, grad);
    const double slope = std::inner_product(grad.begin(), grad.end(), dir.begin(), 0.0);
    if (!(slope > 0.0)) {
      return make_report(it, true);
    }

    double step = options.initialStep;
    bool accepted = false;
    GridFunction trial = v;
    double trial_energy = energy;
    while (step > 1e-14) {
      for (std::size_t i = 0; i < v.values.size(); ++i) {
        trial.values[i] = std::max(0.0, v.values[i] - step * dir[i]);
      }
      trial.values.back() = 0.0;
      try {
        trial = nehari_project(trial, alpha, q, p);
        trial_energy = discrete_energy(trial, alpha, q, p);
        if (trial_energy <= energy - options.armijo * step * slope) {
          accepted = true;
          break;
        }
      } catch (const ProjectionUndefined&) {
      }
      step *= 0.5;
    }
    if (!accepted) {
      return make_report(it, true);
    }
    const double change = (energy - trial_energy) / std::fabs(energy);
    v = std::move(trial);
    energy = trial_energy;
    if (!(energy > 1e-10 * std::fabs(first_energy))) {
      throw NehariNotConverged("Nehari level collapsed toward zero; alpha is likely above the first eigenvalue",
                               make_report(it, false));
    }
    stalls = change < options.stagnationTol ? stalls + 1 : 0;
    if (stalls >= 2) {
      return make_report(it, true);
    }
  }
  throw NehariNotConverged("Nehari minimization exhausted its iteration budget",
                           make_report(options.maxIterations, false));
}

double ground_level_m0(const ProblemParams& params, const NehariOptions& options) {
  return minimize_nehari(0.0, params, options).mAlpha;
}

std::vector<OracleRow> oracle_compare(LocalSolver& solver, std::span<const double> alphas, const NehariOptions& options,
                                      double gap_threshold, int workers) {
  std::vector<OracleRow> rows(alphas.size());
  parallel_for(alphas.size(), workers, [&](std::size_t k) {
    OracleRow row;
    row.alpha = alphas[k];
    std::string failure;
    if (auto sol = solver.try_solve(row.alpha, &failure)) {
      row.dShoot = sol->dirichletEnergy;
    } else {
      row.note = "shooting: " + failure;
    }
    try {
      row.dOracle = minimize_nehari(row.alpha, solver.params(), options).gradNormSq;
    } catch (const Error& e) {
      row.note += (row.note.empty() ? "" : "; ") + std::string("oracle: ") + e.what();
    }
    if (row.dShoot && row.dOracle) {
      row.gap = std::fabs(*row.dShoot - *row.dOracle) / *row.dOracle;
      row.flagged = *row.gap > gap_threshold;
    } else {
      row.flagged = true;
    }
    rows[k] = std::move(row);
  });
  return rows;
}

}  // namespace kirchhoff
