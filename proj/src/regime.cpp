#include "kirchhoff/regime.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/parallel.hpp"

namespace kirchhoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool near(double x, double y) { return std::fabs(x - y) <= kBoundaryTolerance * std::max(std::fabs(x), std::fabs(y)); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

class ConditionList {
 public:
  bool add(std::string name, double lhs, double rhs, bool inclusive = false) {
    const bool holds = inclusive ? lhs <= rhs : lhs < rhs;
    items_.push_back({std::move(name), lhs, rhs, inclusive, holds});
    return holds;
  }
  std::vector<Condition> take() { return std::move(items_); }

 private:
  std::vector<Condition> items_;
};

double ground_factor(double p) { return 2.0 * p / (p - 2.0); }

// Left side of the subcritical two-root inequality with D bounded by c.
double two_root_lhs_sub(const ProblemParams& prm, double c) {
  const double p = prm.p;
  return 2.0 / ((p - 2.0) * prm.mu) * std::pow((p - 2.0) * prm.a / (4.0 - p), (4.0 - p) / 2.0) *
         std::pow(prm.b * c, (p - 2.0) / 2.0);
}

// Left side of the critical two-root inequality (N >= 5) with D bounded by c.
double two_root_lhs_crit(const ProblemParams& prm, double c) {
  const double n = prm.geom.dimension;
  return (n - 2.0) / (2.0 * prm.mu) * std::pow(2.0 * prm.a / (n - 4.0), (n - 4.0) / (n - 2.0)) *
         std::pow(prm.b * c, 2.0 / (n - 2.0));
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

const char* to_string(CaseId id) {
  switch (id) {
    case CaseId::Q2_SUB:
      return "Q2_SUB";
    case CaseId::QGT2_SUB:
      return "QGT2_SUB";
    case CaseId::Q2_CRIT:
      return "Q2_CRIT";
    case CaseId::QGT2_CRIT:
      return "QGT2_CRIT";
  }
  return "?";
}

CaseId case_of(const ProblemParams& params) {
  if (params.q_is_two()) {
    return params.is_critical() ? CaseId::Q2_CRIT : CaseId::Q2_SUB;
  }
  return params.is_critical() ? CaseId::QGT2_CRIT : CaseId::QGT2_SUB;
}

CaseDescriptor describe_case(const ProblemParams& params, const SpectralConstants& consts,
                             std::optional<double> lambda0) {
  params.validate();
  CaseDescriptor d;
  d.id = case_of(params);
  const int n = params.geom.dimension;
  const double lam1 = consts.lambda1;
  ConditionList radial;
  switch (d.id) {
    case CaseId::Q2_SUB:
      d.interval = {0.0, lam1, "0", "lambda1"};
      break;
    case CaseId::QGT2_SUB:
      d.interval = {0.0, kInf, "0", "inf"};
      if (n <= 5) {
        radial.add("(q-1)(p+1) <= N/2", (params.q - 1.0) * (params.p + 1.0), n / 2.0, true);
      } else {
        radial.add("6 <= N", 6.0, n, true);
      }
      break;
    case CaseId::Q2_CRIT:
      if (n == 3) {
        d.interval = {0.25 * lam1, lam1, "lambda1/4", "lambda1"};
      } else {
        d.interval = {0.0, lam1, "0", "lambda1"};
      }
      break;
    case CaseId::QGT2_CRIT:
      if (n == 3) {
        if (!lambda0 || !(*lambda0 > 0.0)) {
          throw InvalidArgument("q > 2, p = 2*, N = 3 needs a positive lambda0 lower endpoint");
        }
        d.interval = {*lambda0, kInf, "lambda0", "inf"};
      } else {
        d.interval = {0.0, kInf, "0", "inf"};
      }
      break;
  }
  d.radiality = radial.take();
  return d;
}

double majorant_minimum(const ProblemParams& prm, double dirichlet_bound) {
  const double k1 = (prm.p - 2.0) / (prm.p - prm.q);
  const double k2 = (prm.p - 4.0) / (prm.p - prm.q);
  if (!(k2 < 0.0)) {
    throw InvalidArgument("the majorant of f has an interior minimum only for p < 4");
  }
  const double big_b = prm.b * dirichlet_bound * std::pow(prm.mu, 2.0 / (2.0 - prm.p));
  const double y = std::pow(-big_b * k2 / (prm.a * k1), 1.0 / (k1 - k2));
  return prm.a * std::pow(y, k1) + big_b * std::pow(y, k2);
}

double majorant_probe(const ProblemParams& prm, double dirichlet_bound) {
  const double k1 = (prm.p - 2.0) / (prm.p - prm.q);
  const double k2 = (prm.p - 4.0) / (prm.p - prm.q);
  if (!(k2 < 0.0)) {
    throw InvalidArgument("the majorant of f has an interior minimum only for p < 4");
  }
  const double big_b = prm.b * dirichlet_bound * std::pow(prm.mu, 2.0 / (2.0 - prm.p));
  const double y = std::pow(-big_b * k2 / (prm.a * k1), 1.0 / (k1 - k2));
  return prm.lambda * y * std::pow(prm.mu, -(prm.q - 2.0) / (prm.p - 2.0));
}

double f_limit(double alpha_end, double dirichlet, const ProblemParams& params) {
  if (alpha_end > 0.0) {
    // f is affine in D; this also admits the limit D = 0.
    const double f1 = f_eval(alpha_end, 1.0, params);
    return f1 + (f_eval(alpha_end, 2.0, params) - f1) * (dirichlet - 1.0);
  }
  const double k2 = (params.p - 4.0) / (params.p - params.q);
  if (std::fabs(params.p - 4.0) <= 1.0e-12) {
    return params.b * std::pow(params.mu, 2.0 / (2.0 - params.p)) * dirichlet;
  }
  return k2 > 0.0 ? 0.0 : kInf;
}

double alpha_first_term_bound(const ProblemParams& params) {
  const double y = std::pow(params.a, -(params.p - params.q) / (params.p - 2.0));
  return params.lambda * y * std::pow(params.mu, -(params.q - 2.0) / (params.p - 2.0));
}

RegimePrediction classify(const ProblemParams& params, const SpectralConstants& consts, double m0,
                          std::optional<double> lambda0) {
  params.validate();
  RegimePrediction pred;
  pred.caseInfo = describe_case(params, consts, lambda0);
  const CaseId id = pred.caseInfo.id;
  const int n = params.geom.dimension;
  const double a = params.a, b = params.b, lam = params.lambda, mu = params.mu;
  const double q = params.q, p = params.p;
  const double lam1 = consts.lambda1;
  const double s = consts.sobolevS;
  const double s_half_n = std::pow(s, n / 2.0);

  if (params.q_is_two() && near(lam, a * lam1)) {
    throw UnsupportedRegime("lambda = a*lambda1 is a boundary of every q = 2 case");
  }
  if (near(mu, b * s * s)) {
    throw UnsupportedRegime("mu = b*S^2 is a boundary case");
  }

  AuxiliaryConstants& aux = pred.aux;
  aux.m0 = m0;
  if (std::isfinite(m0)) {
    const double g = ground_factor(p) * m0;
    aux.C = lam1 * std::pow(consts.ballVolume, (p - 2.0) / p) * std::pow(g, 2.0 / p) + g;
    if (!params.q_is_two()) {
      aux.C1 = 2.0 * q / (q - 2.0) * m0;
    }
  }
  aux.C2 = lam1 * std::pow(consts.ballVolume, 2.0 / n) * std::pow(s, (n - 2.0) / 2.0) + s_half_n;
  if (!params.q_is_two()) {
    aux.C3 = 2.0 * q / (n * (q - 2.0)) * s_half_n;
  }

  ConditionList cond;
  auto match = [&](bool ok, const std::string& label, int count) {
    if (!ok) return;
    pred.allMatches.push_back(label);
    if (count > pred.guaranteedCount) {
      pred.guaranteedCount = count;
      pred.matchedCase = label;
    }
  };
  const bool p_is_4 = std::fabs(p - 4.0) <= 1.0e-12;
  const bool p_gt_4 = p > 4.0 && !p_is_4;
  const bool p_lt_4 = p < 4.0 && !p_is_4;

  switch (id) {
    case CaseId::Q2_SUB: {
      const bool below = cond.add("lambda < a*lambda1", lam, a * lam1);
      const bool above = cond.add("a*lambda1 < lambda", a * lam1, lam);
      const double k = ground_factor(p) * m0 * b / mu;
      if (p_is_4 && near(k, 1.0)) {
        throw UnsupportedRegime("2p/(p-2) m0 b/mu = 1 is a boundary case");
      }
      const bool k_lt = p_is_4 && cond.add("2p/(p-2) m0 b/mu < 1", k, 1.0);
      const bool k_gt = p_is_4 && cond.add("1 < 2p/(p-2) m0 b/mu", 1.0, k);
      match(p_gt_4 && below, "p>4, lambda<a*lambda1", 1);
      match(p_is_4 && below && k_lt, "p=4, lambda<a*lambda1, 2p/(p-2) m0 b/mu<1", 1);
      match(p_is_4 && above && k_gt, "p=4, lambda>a*lambda1, 2p/(p-2) m0 b/mu>1", 1);
      match(p_lt_4 && above, "p<4, lambda>a*lambda1", 1);
      if (p_lt_4) {
        aux.twoRootLhs = two_root_lhs_sub(params, aux.C);
        const bool two = cond.add("two-root inequality with C", aux.twoRootLhs, 1.0);
        match(below && two, "p<4, lambda<a*lambda1, two-root inequality", 2);
        pred.probeAlpha = majorant_probe(params, aux.C);
        pred.probeAlphaAsStated = lam / mu * std::pow((4.0 - p) * b * aux.C / (a * (p - 2.0)), (p - 2.0) / 2.0);
      }
      pred.lowerLimit.value = p_lt_4 ? kInf : (p_is_4 ? k : 0.0);
      pred.upperLimit.value = a * lam1 / lam;
      break;
    }
    case CaseId::QGT2_SUB: {
      const double r = (q - 1.0) * (p + 1.0);
      const double k = ground_factor(p) * m0 * b / mu;
      const bool n3 = n == 3;
      const bool r3 = cond.add("(q-1)(p+1) <= 3/2", r, 1.5, true);
      const bool k_lt = p_is_4 && cond.add("2p/(p-2) m0 b/mu < 1", k, 1.0);
      match(n3 && p_gt_4 && r3, "N=3, p>4, (q-1)(p+1)<=3/2", 1);
      match(n3 && p_is_4 && r3 && k_lt, "N=3, p=4, (q-1)(p+1)<=3/2, 2p/(p-2) m0 b/mu<1", 1);
      if (p_lt_4) {
        aux.twoRootLhs = two_root_lhs_sub(params, aux.C1);
        const bool two = cond.add("two-root inequality with C1", aux.twoRootLhs, 1.0);
        bool radial = n >= 6;
        if (n <= 5) {
          radial = cond.add("(q-1)(p+1) <= N/2", r, n / 2.0, true);
        }
        match(two && radial, n >= 6 ? "p<4, N>=6, two-root inequality"
                                    : "p<4, 3<=N<=5, (q-1)(p+1)<=N/2, two-root inequality",
              2);
        pred.probeAlpha = majorant_probe(params, aux.C1);
        pred.probeAlphaAsStated = lam / mu * std::pow((4.0 - p) * b * aux.C1 / ((p - 2.0) * a), (p - q) / 2.0);
      }
      pred.lowerLimit.value = p_lt_4 ? kInf : (p_is_4 ? k : 0.0);
      pred.upperLimit.value = kInf;
      break;
    }
    case CaseId::Q2_CRIT: {
      const bool below = cond.add("lambda < a*lambda1", lam, a * lam1);
      const bool above = cond.add("a*lambda1 < lambda", a * lam1, lam);
      pred.upperLimit.value = a * lam1 / lam;
      if (n == 3) {
        const double ratio = lam1 / (4.0 * lam);
        aux.criticalN3Limit = a * ratio + b * std::sqrt(ratio) * std::pow(s, 1.5) / std::sqrt(mu);
        aux.criticalN3LimitAsStated = a / 4.0 + b * std::pow(s, 1.5) / (2.0 * std::sqrt(mu));
        if (near(aux.criticalN3Limit, 1.0)) {
          throw UnsupportedRegime("f(lambda1/4+) = 1 is a boundary case");
        }
        const bool lt = cond.add("f(lambda1/4+) < 1", aux.criticalN3Limit, 1.0);
        const bool gt = cond.add("1 < f(lambda1/4+)", 1.0, aux.criticalN3Limit);
        match(below && lt, "N=3, lambda<a*lambda1, f(lambda1/4+)<1", 1);
        match(above && gt, "N=3, lambda>a*lambda1, f(lambda1/4+)>1", 1);
        pred.lowerLimit.value = aux.criticalN3Limit;
      } else if (n == 4) {
        const bool mu_gt = cond.add("b*S^2 < mu", b * s * s, mu);
        const bool mu_lt = cond.add("mu < b*S^2", mu, b * s * s);
        match(below && mu_gt, "N=4, lambda<a*lambda1, mu>b*S^2", 1);
        match(above && mu_lt, "N=4, lambda>a*lambda1, mu<b*S^2", 1);
        pred.lowerLimit.value = b * s * s / mu;
      } else {
        match(above, "N>=5, lambda>a*lambda1", 1);
        aux.twoRootLhs = two_root_lhs_crit(params, aux.C2);
        const bool two = cond.add("two-root inequality with C2", aux.twoRootLhs, 1.0);
        match(below && two, "N>=5, lambda<a*lambda1, two-root inequality", 2);
        pred.probeAlpha = majorant_probe(params, aux.C2);
        pred.probeAlphaAsStated = lam / mu * std::pow((n - 4.0) * b * aux.C2 / (2.0 * a), 2.0 / (n - 2.0));
        pred.lowerLimit.value = kInf;
      }
      break;
    }
    case CaseId::QGT2_CRIT: {
      pred.upperLimit.value = kInf;
      if (n == 3) {
        const double l0 = pred.caseInfo.interval.lower;
        aux.lambda0Bound = a * std::pow(l0 / lam, 4.0 / (6.0 - q)) * std::pow(mu, (q - 2.0) / (6.0 - q)) +
                           b * aux.C3 * std::pow(l0 / lam, 2.0 / (6.0 - q)) * std::pow(mu, (q - 4.0) / (6.0 - q));
        const bool ok = cond.add("lambda0 bound < 1", aux.lambda0Bound, 1.0);
        match(ok, "N=3, lambda0 bound<1", 1);
        pred.lowerLimit.value = aux.lambda0Bound;
        pred.lowerLimit.upperBound = true;
      } else if (n == 4) {
        const bool mu_gt = cond.add("b*S^2 < mu", b * s * s, mu);
        match(mu_gt, "N=4, mu>b*S^2", 1);
        pred.lowerLimit.value = b * s * s / mu;
      } else {
        aux.twoRootLhs = two_root_lhs_crit(params, aux.C3);
        const bool two = cond.add("two-root inequality with C3", aux.twoRootLhs, 1.0);
        match(two, "N>=5, two-root inequality", 2);
        pred.probeAlpha = majorant_probe(params, aux.C3);
        pred.probeAlphaAsStated = lam * std::pow(mu, (2.0 - q) * (n - 2.0) / 4.0) *
                                  std::pow((n - 4.0) * b * aux.C3 / (2.0 * a), (p - q) / 2.0);
        pred.lowerLimit.value = kInf;
      }
      break;
    }
  }
  pred.conditions = cond.take();
  if (pred.guaranteedCount == 0) {
    throw UnsupportedRegime(std::string("parameters satisfy none of the enumerated existence cases for ") +
                            to_string(id));
  }
  if (pred.guaranteedCount < 2) {
    pred.probeAlpha.reset();
    pred.probeAlphaAsStated.reset();
  }
  return pred;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw InvalidArgument("log_grid needs 0 < lo < hi and at least two points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (points - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<FSample> sample_f(LocalSolver& solver, const ProblemParams& params, std::span<const double> grid,
                              int workers) {
  std::vector<FSample> out(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    FSample s;
    s.alpha = grid[i];
    if (auto sol = solver.try_solve(s.alpha, &s.failure)) {
      s.dirichlet = sol->dirichletEnergy;
      s.f = f_eval(s.alpha, sol->dirichletEnergy, params);
    }
    out[i] = std::move(s);
  });
  return out;
}

namespace {

// Adds points toward an endpoint while the sampled sign of f - 1 disagrees
// with the sign the endpoint limit dictates. Stops at the first failed solve.
void extend_toward(LocalSolver& solver, const ProblemParams& params, std::vector<FSample>& samples, double endpoint,
                   bool lower_side, int target_sign, int steps) {
  auto edge = [&]() -> const FSample* {
    if (lower_side) {
      for (const auto& s : samples)
        if (s.f) return &s;
    } else {
      for (auto it = samples.rbegin(); it != samples.rend(); ++it)
        if (it->f) return &*it;
    }
    return nullptr;
  };
  const FSample* start = edge();
  if (!start || target_sign == 0 || sign_of(*start->f - 1.0) == target_sign) {
    return;
  }
  const double from = start->alpha;
  for (int j = 1; j <= steps; ++j) {
    double alpha;
    if (lower_side) {
      alpha = endpoint > 0.0 ? endpoint + (from - endpoint) * std::pow(0.25, j) : from * std::pow(0.1, j);
    } else {
      alpha = endpoint - (endpoint - from) * std::pow(0.1, j);
    }
    if (!(alpha > 0.0) || alpha == from) break;
    const double a_arr[1] = {alpha};
    FSample s = sample_f(solver, params, a_arr, 1).front();
    const bool ok = s.f.has_value();
    const int sg = ok ? sign_of(*s.f - 1.0) : 0;
    samples.push_back(std::move(s));
    if (!ok || sg == target_sign) break;
  }
  std::sort(samples.begin(), samples.end(), [](const FSample& x, const FSample& y) { return x.alpha < y.alpha; });
}

}  // namespace

ScanRange default_scan_range(const AlphaInterval& iv, const ProblemParams& params, const RootSearchOptions& options) {
  ScanRange out;
  const double cap = alpha_first_term_bound(params);
  if (options.alphaMax) {
    out.hi = *options.alphaMax;
  } else if (std::isfinite(iv.upper) && iv.upper - 1.0e-4 * (iv.upper - iv.lower) < cap) {
    out.hi = iv.upper - 1.0e-4 * (iv.upper - iv.lower);
  } else {
    out.hi = std::min(cap, iv.upper);
    out.capped = true;
  }
  if (options.alphaMin) {
    out.lo = *options.alphaMin;
  } else if (iv.lower > 0.0) {
    out.lo = iv.lower + 1.0e-3 * (out.hi - iv.lower);
  } else {
    out.lo = out.hi * options.lowerFraction;
  }
  if (!(out.lo < out.hi) || !iv.contains(out.lo) || !iv.contains(out.hi)) {
    throw InvalidArgument("scan range [" + fmt(out.lo) + ", " + fmt(out.hi) +
                          "] must lie inside the admissible interval");
  }
  return out;
}

RootReport find_roots(LocalSolver& solver, const ProblemParams& params, const SpectralConstants& consts, double m0,
                      const RootSearchOptions& options) {
  params.validate();
  if (!solver.compatible_with(params)) {
    throw InvalidArgument("local solver was built for a different local problem");
  }
  RootReport rep;
  rep.params = params;
  if (options.forcedInterval) {
    rep.interval = *options.forcedInterval;
  } else {
    rep.prediction = classify(params, consts, m0, options.lambda0);
    rep.interval = rep.prediction->caseInfo.interval;
  }
  const AlphaInterval& iv = rep.interval;
  if (!(iv.lower >= 0.0) || !(iv.upper > iv.lower)) {
    throw InvalidArgument("alpha interval must satisfy 0 <= lower < upper");
  }

  const auto [lo, hi, capped] = default_scan_range(iv, params, options);
  std::vector<double> grid = log_grid(lo, hi, options.gridPoints);
  std::optional<double> probe;
  if (rep.prediction && rep.prediction->probeAlpha) {
    probe = rep.prediction->probeAlpha;
    if (*probe > lo && *probe < hi) {
      grid.insert(std::upper_bound(grid.begin(), grid.end(), *probe), *probe);
    } else {
      rep.warnings.push_back("probe point " + fmt(*probe) + " lies outside the scanned range");
    }
  }
  rep.samples = sample_f(solver, params, grid, options.workers);

  if (rep.prediction) {
    const auto& lower = rep.prediction->lowerLimit;
    if (!options.alphaMin && lower.value) {
      int target = sign_of(*lower.value - 1.0);
      if (lower.upperBound && target > 0) target = 0;
      extend_toward(solver, params, rep.samples, iv.lower, true, target, options.extendSteps);
    }
    const auto& upper = rep.prediction->upperLimit;
    if (!options.alphaMax && !capped && std::isfinite(iv.upper) && upper.value) {
      extend_toward(solver, params, rep.samples, iv.upper, false, sign_of(*upper.value - 1.0), options.extendSteps);
    }
  }

  struct Bracket {
    double lo, hi, glo, ghi;
  };
  std::vector<Bracket> brackets;
  const FSample* prev = nullptr;
  bool gap_since_prev = false;
  for (const auto& s : rep.samples) {
    if (!s.f) {
      gap_since_prev = true;
      continue;
    }
    const double g = *s.f - 1.0;
    if (g == 0.0) {
      brackets.push_back({s.alpha, s.alpha, 0.0, 0.0});
    } else if (prev && sign_of(*prev->f - 1.0) * sign_of(g) < 0) {
      brackets.push_back({prev->alpha, s.alpha, *prev->f - 1.0, g});
      if (gap_since_prev) {
        rep.warnings.push_back("sign change across failed samples near alpha = " + fmt(s.alpha));
      }
    }
    prev = &s;
    gap_since_prev = false;
  }

  const double cert_tol = options.reconstruct.rootTolerance >= 0.0 ? options.reconstruct.rootTolerance : 1.0e-8;
  for (const auto& br : brackets) {
    RootInfo root;
    root.bracketLo = br.lo;
    root.bracketHi = br.hi;
    double best_alpha = br.lo, best_g = br.glo;
    if (br.lo < br.hi) {
      if (std::fabs(br.ghi) < std::fabs(best_g)) {
        best_alpha = br.hi;
        best_g = br.ghi;
      }
      auto g = [&](double x) {
        const double alpha = std::exp(x);
        const auto sol = solver.solve(alpha);
        const double v = f_eval(alpha, sol->dirichletEnergy, params) - 1.0;
        if (std::fabs(v) < std::fabs(best_g)) {
          best_g = v;
          best_alpha = alpha;
        }
        return v;
      };
      auto done = [&](double x0, double x1) {
        return std::fabs(best_g) <= params.tol.root || std::fabs(x1 - x0) <= 1.0e-14 * std::max(1.0, std::fabs(x0));
      };
      std::uintmax_t iters = static_cast<std::uintmax_t>(options.maxRefineIterations);
      try {
        boost::math::tools::toms748_solve(g, std::log(br.lo), std::log(br.hi), br.glo, br.ghi, done, iters);
      } catch (const Error& e) {
        root.note = std::string("refinement stopped: ") + e.what();
      }
      root.iterations = static_cast<int>(iters);
    }
    root.alpha = best_alpha;
    root.fMinusOne = best_g;
    if (std::fabs(best_g) > cert_tol) {
      rep.warnings.push_back("GridTooCoarse: sign change near alpha = " + fmt(best_alpha) +
                             " was not resolved (|f-1| = " + fmt(std::fabs(best_g)) + "); refine the grid");
      root.note += root.note.empty() ? "unresolved" : "; unresolved";
      rep.roots.push_back(std::move(root));
      continue;
    }
    try {
      auto sol = reconstruct(*solver.solve(best_alpha), params, options.reconstruct);
      root.residual = sol.residual;
      root.certified = true;
      rep.solutions.push_back(std::move(sol));
    } catch (const Error& e) {
      root.note += (root.note.empty() ? "" : "; ") + std::string("reconstruction failed: ") + e.what();
    }
    rep.roots.push_back(std::move(root));
  }

  rep.numericCount = static_cast<int>(
      std::count_if(rep.roots.begin(), rep.roots.end(), [&](const RootInfo& r) { return std::fabs(r.fMinusOne) <= cert_tol; }));
  rep.agreement = !rep.prediction || rep.numericCount >= rep.prediction->guaranteedCount;
  if (probe && rep.prediction->guaranteedCount == 2) {
    bool below = false, above = false;
    for (const auto& r : rep.roots) {
      if (std::fabs(r.fMinusOne) > cert_tol) continue;
      below = below || r.bracketHi <= *probe;
      above = above || r.bracketLo >= *probe;
    }
    rep.probeSeparates = below && above;
  }
  return rep;
}

namespace {

struct Approach {
  double endpoint;
  int kFirst, kLast;
  double (*alpha)(double lam1, int k);
};

}  // namespace

LimitReport verify_limits(LocalSolver& solver, Endpoint endpoint, const ProblemParams& params,
                          const SpectralConstants& consts, double m0, const LimitOptions& options) {
  params.validate();
  LimitReport rep;
  rep.caseId = case_of(params);
  rep.endpoint = endpoint;
  const int n = params.geom.dimension;
  const double lam1 = consts.lambda1;
  const bool critical = params.is_critical();

  Approach ap{};
  if (endpoint == Endpoint::Upper) {
    if (!params.q_is_two()) {
      throw InvalidArgument("the admissible interval has no finite upper endpoint for q > 2");
    }
    ap = {lam1, 4, 12, [](double l, int k) { return l * (1.0 - std::ldexp(1.0, -k)); }};
    rep.predicted = 0.0;
    rep.predictedLabel = "0";
  } else if (critical && n == 3) {
    if (!params.q_is_two()) {
      throw InvalidArgument("no limit is available at lambda0");
    }
    ap = {0.25 * lam1, 4, 12, [](double l, int k) { return 0.25 * l + 0.75 * l * std::ldexp(1.0, -k); }};
    rep.predicted = std::pow(consts.sobolevS, 1.5);
    rep.predictedLabel = "S^{3/2}";
  } else if (critical) {
    ap = {0.0, n == 4 ? 2 : 4, n == 4 ? 6 : 10, [](double l, int k) { return l * std::ldexp(1.0, -k); }};
    rep.predicted = std::pow(consts.sobolevS, n / 2.0);
    rep.predictedLabel = "S^{N/2}";
  } else {
    ap = {0.0, 4, 12, [](double l, int k) { return l * std::ldexp(1.0, -k); }};
    if (!std::isfinite(m0) || !(m0 > 0.0)) {
      throw InvalidArgument("the lower subcritical limit needs a positive m0");
    }
    rep.predicted = ground_factor(params.p) * m0;
    rep.predictedLabel = "2p/(p-2) m0";
  }
  const int k0 = options.kFirst.value_or(ap.kFirst);
  const int k1 = options.kLast.value_or(ap.kLast);
  if (k1 - k0 < 3) {
    throw InvalidArgument("the approach sequence needs at least four terms");
  }
  rep.endpointAlpha = ap.endpoint;

  std::vector<double> alphas;
  for (int k = k0; k <= k1; ++k) alphas.push_back(ap.alpha(lam1, k));
  if (rep.predicted == 0.0) alphas.push_back(0.5 * lam1);
  const auto samples = sample_f(solver, params, alphas, options.workers);
  for (int k = k0; k <= k1; ++k) {
    const auto& s = samples[static_cast<std::size_t>(k - k0)];
    rep.points.push_back({k, s.alpha, s.dirichlet, s.failure});
  }
  if (rep.predicted == 0.0) {
    if (!samples.back().dirichlet) {
      throw ConvergenceNotReached("D(lambda1/2) is unavailable: " + samples.back().failure);
    }
    rep.scale = *samples.back().dirichlet;
  } else {
    rep.scale = rep.predicted;
  }

  // Last run of four consecutive successes.
  std::optional<std::size_t> end;
  for (std::size_t i = rep.points.size(); i >= 4 && !end; --i) {
    bool ok = true;
    for (std::size_t j = i - 4; j < i; ++j) ok = ok && rep.points[j].dirichlet.has_value();
    if (ok) end = i - 1;
  }
  if (!end) {
    throw ConvergenceNotReached("fewer than four consecutive approach points were solved");
  }
  auto rich = [&](std::size_t i) {
    return (8.0 * *rep.points[i].dirichlet - 6.0 * *rep.points[i - 1].dirichlet + *rep.points[i - 2].dirichlet) / 3.0;
  };
  rep.extrapolated = rich(*end);
  rep.previousExtrapolated = rich(*end - 1);
  rep.relativeError = std::fabs(rep.extrapolated - rep.predicted) / rep.scale;
  const double fx = f_limit(ap.endpoint, rep.extrapolated, params);
  const double fp = f_limit(ap.endpoint, rep.predicted, params);
  if (std::isfinite(fx)) rep.fExtrapolated = fx;
  if (std::isfinite(fp)) rep.fPredicted = fp;
  const double change = std::fabs(rep.extrapolated - rep.previousExtrapolated) / rep.scale;
  if (change > options.cauchyTol) {
    throw ConvergenceNotReached("extrapolants " + fmt(rep.previousExtrapolated) + " and " + fmt(rep.extrapolated) +
                                " differ by " + fmt(change) + " relative");
  }
  return rep;
}

HolderReport holder_bound_check(LocalSolver& solver, const ProblemParams& params, const SpectralConstants& consts,
                                double m0, std::span<const double> grid, double slack, int workers) {
  params.validate();
  if (case_of(params) != CaseId::Q2_SUB) {
    throw InvalidArgument("the Hoelder bound applies to q = 2, p < 2*");
  }
  HolderReport rep;
  const double g = ground_factor(params.p) * m0;
  rep.bound = consts.lambda1 * std::pow(consts.ballVolume, (params.p - 2.0) / params.p) *
                  std::pow(g, 2.0 / params.p) + g;
  rep.slack = slack;
  rep.allSatisfied = true;
  rep.worstMargin = kInf;
  for (const auto& s : sample_f(solver, params, grid, workers)) {
    HolderPoint pt;
    pt.alpha = s.alpha;
    pt.dirichlet = s.dirichlet;
    if (s.dirichlet) {
      pt.margin = (rep.bound - *s.dirichlet) / rep.bound;
      pt.satisfied = *s.dirichlet <= (1.0 + slack) * rep.bound;
      rep.worstMargin = std::min(rep.worstMargin, pt.margin);
    } else {
      pt.margin = kNaN;
    }
    rep.allSatisfied = rep.allSatisfied && pt.satisfied;
    rep.points.push_back(pt);
  }
  return rep;
}

double estimate_lambda0(LocalSolver& solver, const SpectralConstants& consts) {
  const auto& prm = solver.params();
  const double threshold = std::pow(consts.sobolevS, prm.geom.dimension / 2.0) / prm.geom.dimension;
  auto ok = [&](double alpha) {
    const auto sol = solver.try_solve(alpha);
    return sol && sol->localEnergy < threshold;
  };
  std::optional<double> pass;
  double fail = 0.0;
  for (int j = 8; j >= -24; --j) {
    const double alpha = consts.lambda1 * std::pow(10.0, j / 4.0);
    if (ok(alpha)) {
      pass = alpha;
    } else if (pass) {
      fail = alpha;
      break;
    }
  }
  if (!pass) {
    throw NoSolutionFound("no alpha with a local solution below the compactness level was found");
  }
  if (fail == 0.0) {
    return *pass;
  }
  double lo = std::log(fail), hi = std::log(*pass);
  while (hi - lo > 1.0e-3) {
    const double mid = 0.5 * (lo + hi);
    (ok(std::exp(mid)) ? hi : lo) = mid;
  }
  return std::exp(hi);
}

}  // namespace kirchhoff
