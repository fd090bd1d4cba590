#include "kirchhoff/profile.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

#include "kirchhoff/constants.hpp"
#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {

using GaussRule = boost::math::quadrature::gauss<double, 10>;

}  // namespace

RadialProfile::RadialProfile(std::vector<double> radii, std::vector<double> values, std::vector<double> derivs,
                             std::vector<double> second_derivs)
    : radii_(std::move(radii)), values_(std::move(values)), derivs_(std::move(derivs)), second_(std::move(second_derivs)) {
  const std::size_t n = radii_.size();
  if (n < 2 || values_.size() != n || derivs_.size() != n || second_.size() != n) {
    throw InvalidArgument("RadialProfile needs at least two nodes and matching column sizes");
  }
  if (radii_.front() != 0.0) {
    throw InvalidArgument("RadialProfile must start at r = 0");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(radii_[i] > radii_[i - 1])) {
      throw InvalidArgument("RadialProfile nodes must be strictly increasing");
    }
  }
}

RadialProfile RadialProfile::from_function(const std::function<std::array<double, 3>(double)>& fn, double radius,
                                           std::size_t intervals) {
  if (intervals == 0 || !(radius > 0.0)) {
    throw InvalidArgument("from_function needs a positive radius and at least one interval");
  }
  std::vector<double> r(intervals + 1), u(intervals + 1), du(intervals + 1), d2u(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    r[i] = i == intervals ? radius : radius * static_cast<double>(i) / static_cast<double>(intervals);
    const auto s = fn(r[i]);
    u[i] = s[0];
    du[i] = s[1];
    d2u[i] = s[2];
  }
  return RadialProfile(std::move(r), std::move(u), std::move(du), std::move(d2u));
}

std::size_t RadialProfile::interval_of(double r) const {
  if (r <= radii_.front()) {
    return 0;
  }
  if (r >= radii_.back()) {
    return radii_.size() - 2;
  }
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  return static_cast<std::size_t>(it - radii_.begin()) - 1;
}

double RadialProfile::value(double r) const {
  const std::size_t i = interval_of(r);
  const double h = radii_[i + 1] - radii_[i];
  const double t = std::clamp((r - radii_[i]) / h, 0.0, 1.0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double t5 = t4 * t;
  const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double h3 = 0.5 * t3 - t4 + 0.5 * t5;
  const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  return values_[i] * h0 + h * derivs_[i] * h1 + h * h * second_[i] * h2 + h * h * second_[i + 1] * h3 +
         h * derivs_[i + 1] * h4 + values_[i + 1] * h5;
}

double RadialProfile::derivative(double r) const {
  const std::size_t i = interval_of(r);
  const double h = radii_[i + 1] - radii_[i];
  const double t = std::clamp((r - radii_[i]) / h, 0.0, 1.0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double d0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
  const double d1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
  const double d2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
  const double d3 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
  const double d4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
  return ((values_[i + 1] - values_[i]) * -d0 + h * (derivs_[i] * d1 + derivs_[i + 1] * d4) +
          h * h * (second_[i] * d2 + second_[i + 1] * d3)) /
         h;
}

double RadialProfile::second_derivative(double r) const {
  const std::size_t i = interval_of(r);
  const double h = radii_[i + 1] - radii_[i];
  const double t = std::clamp((r - radii_[i]) / h, 0.0, 1.0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double e0 = -60.0 * t + 180.0 * t2 - 120.0 * t3;
  const double e1 = -36.0 * t + 96.0 * t2 - 60.0 * t3;
  const double e2 = 1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3;
  const double e3 = 3.0 * t - 12.0 * t2 + 10.0 * t3;
  const double e4 = -24.0 * t + 84.0 * t2 - 60.0 * t3;
  return ((values_[i + 1] - values_[i]) * -e0 + h * (derivs_[i] * e1 + derivs_[i + 1] * e4) +
          h * h * (second_[i] * e2 + second_[i + 1] * e3)) /
         (h * h);
}

RadialProfile RadialProfile::scaled(double c) const {
  RadialProfile out = *this;
  for (auto* col : {&out.values_, &out.derivs_, &out.second_}) {
    for (double& v : *col) {
      v *= c;
    }
  }
  return out;
}

RadialProfile RadialProfile::rescaled_radius(double k) const {
  if (!(k > 0.0)) {
    throw InvalidArgument("radial rescaling factor must be positive");
  }
  RadialProfile out = *this;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.radii_[i] /= k;
    out.derivs_[i] *= k;
    out.second_[i] *= k * k;
  }
  return out;
}

bool RadialProfile::satisfies_solution_invariants(double boundary_tol, double slope_tol) const {
  const double top = values_.front();
  if (!(top > 0.0)) {
    return false;
  }
  if (std::fabs(values_.back()) > boundary_tol * top) {
    return false;
  }
  double slope_scale = 0.0;
  for (double d : derivs_) {
    slope_scale = std::max(slope_scale, std::fabs(d));
  }
  if (std::fabs(derivs_.front()) > slope_tol * slope_scale) {
    return false;
  }
  for (std::size_t i = 0; i + 1 < size(); ++i) {
    if (!(values_[i] > 0.0)) {
      return false;
    }
    if (i > 0 && derivs_[i] > slope_tol * slope_scale) {
      return false;
    }
  }
  return derivs_.back() <= slope_tol * slope_scale;
}

double lp_norm_power(const RadialProfile& profile, int dimension, double s) {
  if (!(s >= 1.0)) {
    throw InvalidArgument("lp_norm needs s >= 1");
  }
  const auto r = profile.radii();
  const double n1 = dimension - 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    total += GaussRule::integrate(
        [&](double x) { return std::pow(std::fabs(profile.value(x)), s) * std::pow(x, n1); }, r[i], r[i + 1]);
  }
  return sphere_area(dimension) * total;
}

double lp_norm(const RadialProfile& profile, int dimension, double s) {
  return std::pow(lp_norm_power(profile, dimension, s), 1.0 / s);
}

double dirichlet_energy(const RadialProfile& profile, int dimension) {
  const auto r = profile.radii();
  const double n1 = dimension - 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    total += GaussRule::integrate(
        [&](double x) {
          const double d = profile.derivative(x);
          return d * d * std::pow(x, n1);
        },
        r[i], r[i + 1]);
  }
  return sphere_area(dimension) * total;
}

LaplacianSample sample_laplacian(const RadialProfile& profile, double r, int dimension) {
  const auto nodes = profile.radii();
  const std::size_t i = profile.interval_of(r);
  const double a = nodes[i];
  const double w = nodes[i + 1] - a;
  LaplacianSample s;
  s.r = std::clamp(r, a + 0.25 * w, a + 0.75 * w);
  const double d = w / 8.0;
  const double upp = (profile.derivative(s.r - 2.0 * d) - 8.0 * profile.derivative(s.r - d) +
                      8.0 * profile.derivative(s.r + d) - profile.derivative(s.r + 2.0 * d)) /
                     (12.0 * d);
  s.value = profile.value(s.r);
  s.slope = profile.derivative(s.r);
  s.laplacian = upp + (dimension - 1.0) / s.r * s.slope;
  return s;
}

}  // namespace kirchhoff
