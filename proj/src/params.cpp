#include "kirchhoff/params.hpp"

#include <cmath>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {
constexpr double kExponentSlack = 1.0e-12;
}

void ProblemParams::validate() const {
  geom.validate();
  for (double v : {a, b, lambda, mu}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("a, b, lambda and mu must be positive and finite");
    }
  }
  if (!(q >= 2.0 - kExponentSlack)) {
    throw InvalidArgument("q must satisfy q >= 2");
  }
  if (!(p > q)) {
    throw InvalidArgument("p must exceed q");
  }
  if (p > critical_exponent(geom.dimension) * (1.0 + kExponentSlack)) {
    throw InvalidArgument("p exceeds the critical exponent 2N/(N-2)");
  }
  if (!(tol.odeRelative > 0.0 && tol.odeAbsolute > 0.0 && tol.radius > 0.0 && tol.root > 0.0 &&
        tol.odeRelativeCritical > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
}

bool ProblemParams::is_critical() const {
  const double crit = critical_exponent(geom.dimension);
  return std::fabs(p - crit) <= kExponentSlack * crit;
}

bool ProblemParams::q_is_two() const { return std::fabs(q - 2.0) <= 2.0 * kExponentSlack; }

}  // namespace kirchhoff
