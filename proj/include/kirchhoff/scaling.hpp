#pragma once

// Reduction of the Kirchhoff problem to the local problem with parameter alpha:
// phi = (lambda / (alpha mu))^{1/(p-q)} u_alpha solves the Kirchhoff problem
// exactly when f(alpha) = 1.

#include "kirchhoff/params.hpp"
#include "kirchhoff/profile.hpp"
#include "kirchhoff/shooting.hpp"

namespace kirchhoff {

/// f(alpha) = a y^{(p-2)/(p-q)} + b y^{(p-4)/(p-q)} mu^{2/(2-p)} D, with
/// y = alpha mu^{(q-2)/(p-2)} / lambda. The p = 4 factor y^0 is taken as 1.
double f_eval(double alpha, double dirichlet, const ProblemParams& params);

struct ScalingChain {
  double tMu = 0.0;          // mu^{1/(2-p)}: u_alpha -> psi solving the mu-weighted problem
  double s = 0.0;            // psi -> phi, fixed by s^{p-q} alpha mu^{(q-2)/(p-2)} = lambda
  double totalFactor = 0.0;  // (lambda / (alpha mu))^{1/(p-q)}
};

ScalingChain scaling_chain(double alpha, const ProblemParams& params);

struct KirchhoffSolution {
  ProblemParams params;
  double alphaRoot = 0.0;
  LocalSolution local;
  RadialProfile profile;  // phi
  ScalingChain chain;
  double fValue = 0.0;
  double gradNormSq = 0.0;          // |grad phi|^2
  double effectiveStiffness = 0.0;  // a + b |grad phi|^2
  double residual = 0.0;            // kirchhoff_residual
  double localResidual = 0.0;       // local_residual of u_alpha
};

struct ReconstructOptions {
  int residualSamples = 200;
  /// Reject local solutions with |f - 1| above this (NotARoot). Negative disables the check.
  double rootTolerance = 1.0e-8;
};

/// Scales u_alpha into the Kirchhoff solution and certifies it.
KirchhoffSolution reconstruct(const LocalSolution& local, const ProblemParams& params,
                              const ReconstructOptions& options = {});

/// Max over sample radii of |-A Lap phi - lambda phi^{q-1} - mu phi^{p-1}| / (1 + lambda phi^{q-1} + mu phi^{p-1}),
/// A = a + b |grad phi|^2 and Lap phi = -T (alpha u^{q-1} + u^{p-1}) from the local equation.
double kirchhoff_residual(const KirchhoffSolution& solution, int sample_count);

}  // namespace kirchhoff
