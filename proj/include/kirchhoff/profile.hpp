#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kirchhoff {

/// Sampled radial function on [0, R]: nodes with u, u' and u''.
///
/// Between nodes u is the quintic Hermite interpolant of (u, u', u''); u' and
/// u'' are its exact derivatives.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::vector<double> radii, std::vector<double> values, std::vector<double> derivs,
                std::vector<double> second_derivs);

  /// Samples (u, u', u'') from a callable on `intervals` equal intervals of [0, radius].
  static RadialProfile from_function(const std::function<std::array<double, 3>(double)>& fn, double radius,
                                     std::size_t intervals);

  std::span<const double> radii() const { return radii_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> derivs() const { return derivs_; }
  std::span<const double> second_derivs() const { return second_; }

  std::size_t size() const { return radii_.size(); }
  bool empty() const { return radii_.empty(); }
  double outer_radius() const { return radii_.back(); }

  /// Index i with radii[i] <= r <= radii[i+1]; r is clamped to the node range.
  std::size_t interval_of(double r) const;

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;

  /// c * u, all three columns.
  RadialProfile scaled(double c) const;
  /// u(k r) sampled at r_i / k, i.e. the radial coordinate stretched by 1/k.
  RadialProfile rescaled_radius(double k) const;

  /// Checks u > 0 on [0, R), |u(R)| <= boundary_tol * u(0), u'(0) = 0 and
  /// u' <= slope_tol * max|u'| elsewhere. Returns false on any violation.
  bool satisfies_solution_invariants(double boundary_tol, double slope_tol) const;

 private:
  std::vector<double> radii_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  std::vector<double> second_;
};

/// omega_{N-1} int_0^R u'(r)^2 r^{N-1} dr, Gauss-Legendre on every node interval.
double dirichlet_energy(const RadialProfile& profile, int dimension);

/// (omega_{N-1} int_0^R |u|^s r^{N-1} dr)^{1/s}.
double lp_norm(const RadialProfile& profile, int dimension, double s);

/// omega_{N-1} int_0^R |u|^s r^{N-1} dr, i.e. lp_norm^s without the root.
double lp_norm_power(const RadialProfile& profile, int dimension, double s);

/// u, u' and u'' + (N-1)/r u' near r. The radius is moved into the middle half
/// of its node interval and u'' is a five-point difference of the interpolated
/// u' there, so the stencil never crosses a node.
struct LaplacianSample {
  double r = 0.0;
  double value = 0.0;
  double slope = 0.0;
  double laplacian = 0.0;
};

LaplacianSample sample_laplacian(const RadialProfile& profile, double r, int dimension);

}  // namespace kirchhoff
