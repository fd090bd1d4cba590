#include "kirchhoff/scaling.hpp"

#include <cmath>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {

double power_or_one(double base, double exponent) { return exponent == 0.0 ? 1.0 : std::pow(base, exponent); }

}  // namespace

double f_eval(double alpha, double dirichlet, const ProblemParams& params) {
  if (!(alpha > 0.0)) {
    throw InvalidArgument("f_eval needs alpha > 0");
  }
  if (!(dirichlet > 0.0)) {
    throw InvalidArgument("f_eval needs a positive Dirichlet energy");
  }
  const double p = params.p;
  const double q = params.q;
  const double y = alpha * power_or_one(params.mu, (q - 2.0) / (p - 2.0)) / params.lambda;
  const double first = params.a * std::pow(y, (p - 2.0) / (p - q));
  const double second = params.b * power_or_one(y, (p - 4.0) / (p - q)) * std::pow(params.mu, 2.0 / (2.0 - p)) * dirichlet;
  return first + second;
}

ScalingChain scaling_chain(double alpha, const ProblemParams& params) {
  if (!(alpha > 0.0)) {
    throw InvalidArgument("scaling chain needs alpha > 0");
  }
  const double p = params.p;
  const double q = params.q;
  ScalingChain chain;
  chain.tMu = std::pow(params.mu, 1.0 / (2.0 - p));
  chain.s = std::pow(params.lambda / (alpha * power_or_one(params.mu, (q - 2.0) / (p - 2.0))), 1.0 / (p - q));
  chain.totalFactor = std::pow(params.lambda / (alpha * params.mu), 1.0 / (p - q));
  return chain;
}

KirchhoffSolution reconstruct(const LocalSolution& local, const ProblemParams& params, const ReconstructOptions& options) {
  params.validate();
  if (local.profile.empty() || !(local.profile.values().front() > 0.0)) {
    throw InvalidArgument("reconstruct needs a positive local profile");
  }
  const double f = f_eval(local.alpha, local.dirichletEnergy, params);
  if (options.rootTolerance >= 0.0 && std::fabs(f - 1.0) > options.rootTolerance) {
    throw NotARoot("f(alpha) - 1 = " + std::to_string(f - 1.0) + " exceeds the root tolerance", f - 1.0);
  }
  KirchhoffSolution sol;
  sol.params = params;
  sol.alphaRoot = local.alpha;
  sol.local = local;
  sol.chain = scaling_chain(local.alpha, params);
  sol.fValue = f;
  sol.profile = local.profile.scaled(sol.chain.totalFactor);
  sol.gradNormSq = dirichlet_energy(sol.profile, params.geom.dimension);
  sol.effectiveStiffness = params.a + params.b * sol.gradNormSq;
  sol.residual = kirchhoff_residual(sol, options.residualSamples);
  sol.localResidual = local_residual(local, params, options.residualSamples);
  return sol;
}

double kirchhoff_residual(const KirchhoffSolution& sol, int sample_count) {
  if (sample_count < 1) {
    throw InvalidArgument("kirchhoff_residual needs at least one sample");
  }
  if (sol.profile.empty() || !(sol.profile.values().front() > 0.0) || sol.local.profile.empty()) {
    throw InvalidArgument("kirchhoff_residual needs a positive profile");
  }
  const auto& prm = sol.params;
  const double stiffness = prm.a + prm.b * dirichlet_energy(sol.profile, prm.geom.dimension);
  const double factor = sol.chain.totalFactor;
  const double radius = sol.profile.outer_radius();
  double worst = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    const double r = radius * (k + 0.5) / sample_count;
    const double u = sol.local.profile.value(r);
    const double phi = sol.profile.value(r);
    const double neg_lap_phi = factor * (sol.alphaRoot * signed_power(u, prm.q - 1.0) + signed_power(u, prm.p - 1.0));
    const double rhs = prm.lambda * signed_power(phi, prm.q - 1.0) + prm.mu * signed_power(phi, prm.p - 1.0);
    worst = std::max(worst, std::fabs(stiffness * neg_lap_phi - rhs) / (1.0 + std::fabs(rhs)));
  }
  return worst;
}

}  // namespace kirchhoff
