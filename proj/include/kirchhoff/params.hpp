#pragma once

#include "kirchhoff/constants.hpp"

namespace kirchhoff {

struct Tolerances {
  double odeRelative = 1.0e-10;
  double odeAbsolute = 1.0e-12;
  /// Relative ODE tolerance used instead of odeRelative when p = 2*.
  double odeRelativeCritical = 1.0e-12;
  /// Shooting stops once |r0 - R| <= radius * R.
  double radius = 1.0e-9;
  /// Target for |f(alpha) - 1| when refining roots.
  double root = 1.0e-10;
};

/// Data of -(a + b |grad u|^2) Lap u = lambda u^{q-1} + mu u^{p-1} on B_R.
struct ProblemParams {
  double a = 1.0;
  double b = 1.0;
  double lambda = 1.0;
  double mu = 1.0;
  double q = 2.0;
  double p = 4.0;
  BallGeometry geom;
  Tolerances tol;

  /// Positivity of a, b, lambda, mu and 2 <= q < p <= 2*. Exponents within
  /// 1e-12 relative of 2* are accepted as critical.
  void validate() const;

  bool is_critical() const;
  bool q_is_two() const;
  double ode_relative() const { return is_critical() ? tol.odeRelativeCritical : tol.odeRelative; }
};

}  // namespace kirchhoff
