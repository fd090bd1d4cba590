#include "kirchhoff/constants.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {

// sum_k (-x^2/4)^k / (k! (nu+1)_k), i.e. Gamma(nu+1) (x/2)^{-nu} J_nu(x).
// Shares the sign of J_nu on x > 0.
long double reduced_bessel_series(long double nu, long double x) {
  const long double z = -0.25L * x * x;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= z / (static_cast<long double>(k) * (nu + static_cast<long double>(k)));
    sum += term;
    if (std::fabs(term) < 1.0e-22L * std::fabs(sum) && static_cast<long double>(k) > 0.5L * std::fabs(x)) {
      break;
    }
  }
  return sum;
}

using GaussRule = boost::math::quadrature::gauss<double, 20>;

// Integrates g over [lo, hi] on geometric panels, which keeps the relative
// accuracy uniform for integrands with power-law decay.
template <typename F>
double integrate_geometric(F&& g, double lo, double first_width, double hi, double ratio) {
  double total = GaussRule::integrate(g, lo, lo + first_width);
  double left = lo + first_width;
  while (left < hi) {
    const double right = std::min(hi, left * ratio);
    total += GaussRule::integrate(g, left, right);
    left = right;
  }
  return total;
}

}  // namespace

void BallGeometry::validate() const {
  if (dimension < 3) {
    throw InvalidArgument("dimension must be >= 3, got " + std::to_string(dimension));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("ball radius must be positive and finite");
  }
}

double bessel_first_zero(double nu) {
  if (!(nu >= 0.0)) {
    throw InvalidArgument("Bessel order must be nonnegative");
  }
  if (nu > 20.0) {
    throw InvalidArgument("Bessel order above 20 is not supported");
  }
  const long double order = nu;
  // j_{nu,1} > nu, and the reduced series is positive on (0, j_{nu,1}).
  const long double step = 0.05L;
  long double lo = std::max(0.0L, order - step);
  long double hi = lo + step;
  while (reduced_bessel_series(order, hi) > 0.0L) {
    lo = hi;
    hi += step;
  }
  for (int it = 0; it < 200 && hi - lo > 1.0e-17L * hi; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (reduced_bessel_series(order, mid) > 0.0L) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

double first_eigenvalue(const BallGeometry& geom) {
  geom.validate();
  const double j = bessel_first_zero(0.5 * geom.dimension - 1.0);
  return (j / geom.radius) * (j / geom.radius);
}

double sphere_area(int dimension) {
  if (dimension < 2) {
    throw InvalidArgument("sphere_area needs dimension >= 2");
  }
  const double half = 0.5 * dimension;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double ball_volume(const BallGeometry& geom) {
  geom.validate();
  return sphere_area(geom.dimension) * std::pow(geom.radius, geom.dimension) / geom.dimension;
}

double critical_exponent(int dimension) {
  if (dimension < 3) {
    throw InvalidArgument("critical exponent needs dimension >= 3");
  }
  return 2.0 * dimension / (dimension - 2.0);
}

double bubble_sobolev_quotient(int dimension, double scale, double truncation, double quad_tol) {
  if (dimension < 3) {
    throw InvalidArgument("Sobolev quotient needs dimension >= 3");
  }
  if (!(scale > 0.0) || !(truncation > 0.0) || !(quad_tol > 0.0)) {
    throw InvalidArgument("scale, truncation and quad_tol must be positive");
  }
  const double n = dimension;
  const double crit = critical_exponent(dimension);
  const double amp = std::pow(scale, 0.5 * (n - 2.0));

  auto grad_sq = [&](double r) {
    const double s = scale * r;
    // U_c'(r) = -(N-2) c^{(N-2)/2} c^2 r (1 + c^2 r^2)^{-N/2}
    const double du = -(n - 2.0) * amp * scale * s * std::pow(1.0 + s * s, -0.5 * n);
    return du * du * std::pow(r, n - 1.0);
  };
  auto power = [&](double r) {
    const double s = scale * r;
    const double u = amp * std::pow(1.0 + s * s, -0.5 * (n - 2.0));
    return std::pow(u, crit) * std::pow(r, n - 1.0);
  };

  const double first = 1.0e-3 / scale;
  const double grad_core = integrate_geometric(grad_sq, 0.0, first, truncation, 1.15);
  const double pow_core = integrate_geometric(power, 0.0, first, truncation, 1.15);

  // Both tails only depend on X = c T; expand (1 + X^{-2})^{-N}.
  const double x = scale * truncation;
  const double grad_tail = (n - 2.0) * std::pow(x, 2.0 - n);
  const double grad_next = (n - 2.0) * (n - 2.0) * std::pow(x, -n);
  const double pow_tail = std::pow(x, -n) / n;
  const double pow_next = n / (n + 2.0) * std::pow(x, -n - 2.0);

  const double grad_total = grad_core + grad_tail;
  const double pow_total = pow_core + pow_tail;
  const double tail_error = std::max(grad_next / grad_total, pow_next / pow_total);
  if (tail_error > quad_tol) {
    throw InvalidArgument("truncation radius too small: tail estimate " + std::to_string(tail_error) +
                          " exceeds quad_tol");
  }
  const double omega = sphere_area(dimension);
  return omega * grad_total / std::pow(omega * pow_total, 2.0 / crit);
}

double sobolev_constant(int dimension, double truncation, double quad_tol) {
  return bubble_sobolev_quotient(dimension, 1.0, truncation, quad_tol);
}

SpectralConstants spectral_constants(const BallGeometry& geom) {
  geom.validate();
  SpectralConstants out;
  out.lambda1 = first_eigenvalue(geom);
  out.sobolevS = sobolev_constant(geom.dimension);
  out.sphereArea = sphere_area(geom.dimension);
  out.ballVolume = ball_volume(geom);
  return out;
}

}  // namespace kirchhoff
