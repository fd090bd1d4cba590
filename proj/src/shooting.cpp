#include "kirchhoff/shooting.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/ode.hpp"

namespace kirchhoff {

namespace {

using State2 = ode::State<2>;

struct RadialRhs {
  double dim1;  // N - 1
  double alpha;
  double qm1;
  double pm1;

  double source(double u) const { return alpha * signed_power(u, qm1) + signed_power(u, pm1); }

  State2 operator()(double r, const State2& y) const {
    return {y[1], -dim1 * y[1] / r - source(y[0])};
  }
};

double max_radius(const ProblemParams& params, const ShootingOptions& options) {
  return options.maxRadius > 0.0 ? options.maxRadius : options.maxRadiusFactor * params.geom.radius;
}

// Zero of the dense u component inside a step whose end value is <= 0.
double locate_zero(const ode::DenseStep<2>& step) {
  if (step.end[0] == 0.0) {
    return step.finish();
  }
  auto u = [&](double r) { return step.eval(r)[0]; };
  std::uintmax_t iters = 200;
  auto tol = [](double lo, double hi) { return hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi; };
  const auto [lo, hi] = boost::math::tools::toms748_solve(u, step.start, step.finish(), step.begin[0], step.end[0],
                                                          tol, iters);
  return 0.5 * (lo + hi);
}

}  // namespace

double signed_power(double u, double e) {
  if (e == 1.0) {
    return u;
  }
  if (e == 2.0) {
    return u * std::fabs(u);
  }
  if (e == 3.0) {
    return u * u * u;
  }
  if (e == 5.0) {
    const double u2 = u * u;
    return u2 * u2 * u;
  }
  const double mag = std::pow(std::fabs(u), e);
  return u < 0.0 ? -mag : mag;
}

double local_energy(double alpha, double q, double p, double dirichlet, double lq_power, double lp_power) {
  return 0.5 * dirichlet - alpha / q * lq_power - lp_power / p;
}

ShotOutcome shoot(double alpha, double beta, const ProblemParams& params, const ShootingOptions& options,
                  bool keep_profile) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidAmplitude("shooting amplitude must be positive and finite");
  }
  const int dim = params.geom.dimension;
  const double radius = params.geom.radius;
  const RadialRhs rhs{dim - 1.0, alpha, params.q - 1.0, params.p - 1.0};

  // Regularized start from the Taylor expansion at the removable singularity.
  const double c = rhs.source(beta);
  const double length = std::fabs(c) > 0.0 ? std::sqrt(dim * beta / std::fabs(c)) : radius;
  const double h0 = options.startFraction * std::min(radius, length);
  const State2 y0{beta - c * h0 * h0 / (2.0 * dim), -c * h0 / dim};

  std::vector<double> rr, uu, du, d2u;
  if (keep_profile) {
    rr = {0.0, h0};
    uu = {beta, y0[0]};
    du = {0.0, y0[1]};
    d2u = {-c / dim, rhs(h0, y0)[1]};
  }

  ode::StepControl ctl;
  ctl.relative = params.ode_relative();
  ctl.absolute = params.tol.odeAbsolute * beta;
  ctl.magnitudeBound = options.magnitudeBound * std::max(1.0, beta);
  if (keep_profile && options.profileMaxStepFactor > 0.0) {
    ctl.maxStep = options.profileMaxStepFactor * radius;
  }
  ctl.initialStep = std::min(h0, 0.1 * std::min(radius, length));

  const double stop = max_radius(params, options);
  std::optional<double> zero;
  const double reached = ode::integrate<2>(rhs, h0, y0, stop, ctl, [&](const ode::DenseStep<2>& step) {
    if (step.end[0] <= 0.0) {
      const double r0 = locate_zero(step);
      zero = r0;
      if (keep_profile) {
        const State2 at = step.eval(r0);
        if (r0 > rr.back()) {
          rr.push_back(r0);
          uu.push_back(0.0);
          du.push_back(at[1]);
          d2u.push_back(rhs(r0, State2{0.0, at[1]})[1]);
        } else {
          uu.back() = 0.0;
        }
      }
      return false;
    }
    if (keep_profile) {
      rr.push_back(step.finish());
      uu.push_back(step.end[0]);
      du.push_back(step.end[1]);
      d2u.push_back(step.slopeEnd[1]);
    }
    return true;
  });

  if (!zero) {
    return NoZero{reached};
  }
  FirstZero out;
  out.radius = *zero;
  if (keep_profile) {
    out.profile = RadialProfile(std::move(rr), std::move(uu), std::move(du), std::move(d2u));
  }
  return out;
}

LocalSolution solve_local(double alpha, const ProblemParams& params, const ShootingOptions& options) {
  params.validate();
  const double radius = params.geom.radius;
  const double stop = max_radius(params, options);
  if (!(stop > radius)) {
    throw InvalidArgument("maximum shooting radius must exceed R");
  }

  // Signed miss r0(beta) - R, capped at the integration limit.
  auto miss = [&](double log_beta) {
    const ShotOutcome shot = shoot(alpha, std::exp(log_beta), params, options, false);
    if (const auto* z = std::get_if<FirstZero>(&shot)) {
      return z->radius - radius;
    }
    return stop - radius;
  };

  const double beta_lin = std::pow(radius, -2.0 / (params.p - 2.0));
  const double step = std::log(10.0) / std::max(1, options.scanPerDecade);
  double lo = std::log(options.betaMinFactor * beta_lin);
  double hi = std::log(options.betaMaxFactor * beta_lin);
  std::vector<std::pair<double, double>> scan;
  for (double x = lo; x <= hi + 1e-12; x += step) {
    scan.emplace_back(x, miss(x));
  }

  auto has_sign_change = [&] {
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
      if ((scan[i].second > 0.0) != (scan[i + 1].second > 0.0)) {
        return true;
      }
    }
    return false;
  };

  // Grow the scan toward the side that still misses: positive miss means the
  // amplitude is too small, negative means too large.
  for (int extra = 0; extra < options.expandDecades * std::max(1, options.scanPerDecade) && !has_sign_change();
       ++extra) {
    const bool all_positive = std::all_of(scan.begin(), scan.end(), [](const auto& s) { return s.second > 0.0; });
    try {
      if (all_positive) {
        const double x = scan.back().first + step;
        scan.emplace_back(x, miss(x));
      } else {
        const double x = scan.front().first - step;
        scan.insert(scan.begin(), {x, miss(x)});
      }
    } catch (const NonFiniteBlowup&) {
      break;
    } catch (const NotConverged&) {
      break;
    }
  }

  // A sign change against a plateau of positive misses below the radius
  // tolerance is integration noise around the trivial solution (alpha at an
  // eigenvalue), not a root.
  const double noise = params.tol.radius * radius;
  auto in_noise = [&](std::size_t i) { return scan[i].second > 0.0 && scan[i].second <= noise; };
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    if ((scan[i].second > 0.0) != (scan[i + 1].second > 0.0)) {
      const std::size_t pos = scan[i].second > 0.0 ? i : i + 1;
      if (in_noise(pos)) {
        const bool below = pos == i;
        double outer = 0.0;
        if (below && i > 0) {
          outer = scan[i - 1].second;
        } else if (!below && i + 2 < scan.size()) {
          outer = scan[i + 2].second;
        } else {
          outer = miss(scan[pos].first + (below ? -step : step));
        }
        if (outer > 0.0 && outer <= noise) {
          continue;
        }
      }
      brackets.emplace_back(i, i + 1);
    }
  }
  if (brackets.empty()) {
    throw NoSolutionFound("no amplitude bracket for alpha = " + std::to_string(alpha) + " in beta range [" +
                          std::to_string(std::exp(scan.front().first)) + ", " +
                          std::to_string(std::exp(scan.back().first)) + "]");
  }

  const double target = params.tol.radius * radius;
  std::vector<LocalSolution> candidates;
  for (const auto& [ia, ib] : brackets) {
    const auto& left = scan[ia];
    const auto& right = scan[ib];
    double best_x = std::fabs(left.second) < std::fabs(right.second) ? left.first : right.first;
    double best_miss = std::min(std::fabs(left.second), std::fabs(right.second));
    auto tracked = [&](double x) {
      const double m = miss(x);
      if (std::fabs(m) < best_miss) {
        best_miss = std::fabs(m);
        best_x = x;
      }
      return m;
    };
    auto done = [&](double a, double b) { return best_miss <= target || std::fabs(b - a) <= 1e-15 * std::fabs(a) + 1e-15; };
    std::uintmax_t iters = 200;
    if (best_miss > target) {
      boost::math::tools::toms748_solve(tracked, left.first, right.first, left.second, right.second, done, iters);
    }

    const double beta = std::exp(best_x);
    const ShotOutcome shot = shoot(alpha, beta, params, options, true);
    const auto* z = std::get_if<FirstZero>(&shot);
    if (z == nullptr) {
      continue;
    }
    LocalSolution sol;
    sol.alpha = alpha;
    sol.amplitude = beta;
    sol.profile = z->profile.rescaled_radius(z->radius / radius);
    const int dim = params.geom.dimension;
    sol.dirichletEnergy = dirichlet_energy(sol.profile, dim);
    sol.lqPower = lp_norm_power(sol.profile, dim, params.q);
    sol.lpPower = lp_norm_power(sol.profile, dim, params.p);
    sol.localEnergy = local_energy(alpha, params.q, params.p, sol.dirichletEnergy, sol.lqPower, sol.lpPower);
    candidates.push_back(std::move(sol));
  }
  if (candidates.empty()) {
    throw NoSolutionFound("amplitude refinement lost the zero crossing for alpha = " + std::to_string(alpha));
  }

  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [](const auto& x, const auto& y) { return x.localEnergy < y.localEnergy; });
  LocalSolution out = std::move(*best);
  out.bracketCount = static_cast<int>(brackets.size());
  for (auto it = candidates.begin(); it != candidates.end(); ++it) {
    if (it->amplitude != out.amplitude) {
      out.alternateAmplitudes.push_back(it->amplitude);
      out.alternateEnergies.push_back(it->localEnergy);
    }
  }
  return out;
}

double local_residual(const RadialProfile& profile, const LocalEquation& eq, int sample_count) {
  if (sample_count < 1) {
    throw InvalidArgument("local_residual needs at least one sample");
  }
  const double radius = profile.outer_radius();
  double worst = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    const auto s = sample_laplacian(profile, radius * (k + 0.5) / sample_count, eq.dimension);
    const double src =
        eq.alpha * signed_power(s.value, eq.q - 1.0) + (eq.powerTerm ? signed_power(s.value, eq.p - 1.0) : 0.0);
    const double res = std::fabs(s.laplacian + src) / (1.0 + std::fabs(src));
    worst = std::max(worst, res);
  }
  return worst;
}

double local_residual(const LocalSolution& solution, const ProblemParams& params, int sample_count) {
  return local_residual(solution.profile, LocalEquation{params.geom.dimension, solution.alpha, params.q, params.p, true},
                        sample_count);
}

LocalSolver::LocalSolver(const ProblemParams& params, ShootingOptions options)
    : params_(params), options_(options) {
  params_.validate();
}

bool LocalSolver::compatible_with(const ProblemParams& o) const {
  const auto& t = params_.tol;
  return o.q == params_.q && o.p == params_.p && o.geom.dimension == params_.geom.dimension &&
         o.geom.radius == params_.geom.radius && o.tol.odeRelative == t.odeRelative &&
         o.tol.odeAbsolute == t.odeAbsolute && o.tol.odeRelativeCritical == t.odeRelativeCritical &&
         o.tol.radius == t.radius;
}

std::size_t LocalSolver::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::shared_ptr<const LocalSolution> LocalSolver::try_solve(double alpha, std::string* failure) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(alpha); it != cache_.end()) {
      if (failure != nullptr) {
        *failure = it->second.failure;
      }
      return it->second.solution;
    }
  }
  Entry entry;
  try {
    entry.solution = std::make_shared<const LocalSolution>(solve_local(alpha, params_, options_));
  } catch (const NoSolutionFound& e) {
    entry.failure = e.what();
  } catch (const NonFiniteBlowup& e) {
    entry.failure = e.what();
  } catch (const NotConverged& e) {
    entry.failure = e.what();
  }
  if (failure != nullptr) {
    *failure = entry.failure;
  }
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(alpha, std::move(entry));
  return it->second.solution;
}

std::shared_ptr<const LocalSolution> LocalSolver::solve(double alpha) {
  std::string failure;
  auto sol = try_solve(alpha, &failure);
  if (!sol) {
    throw NoSolutionFound(failure);
  }
  return sol;
}

}  // namespace kirchhoff
