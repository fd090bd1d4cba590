#pragma once

// Special constants of the unit problem on a ball: Bessel zeros, the first
// Dirichlet eigenvalue, sphere areas and the best Sobolev constant.

namespace kirchhoff {

struct BallGeometry {
  int dimension = 3;
  double radius = 1.0;

  /// Throws InvalidArgument unless dimension >= 3 and radius > 0.
  void validate() const;
};

struct SpectralConstants {
  double lambda1 = 0.0;
  double sobolevS = 0.0;
  double sphereArea = 0.0;
  double ballVolume = 0.0;
};

/// First positive zero j_{nu,1} of J_nu, bracketed on a coarse scan and refined
/// by bisection on the power series of J_nu(x) (x/2)^{-nu} in long double.
/// Supported for 0 <= nu <= 20.
double bessel_first_zero(double nu);

/// (j_{N/2-1,1} / R)^2.
double first_eigenvalue(const BallGeometry& geom);

/// Surface area of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int dimension);

double ball_volume(const BallGeometry& geom);

/// 2N / (N - 2).
double critical_exponent(int dimension);

/// Sobolev quotient |grad U_c|^2 / |U_c|_{2*}^2 of the rescaled bubble
/// U_c(r) = c^{(N-2)/2} (1 + c^2 r^2)^{-(N-2)/2}, integrated on [0, truncation]
/// with the leading power-law tail of each integrand added analytically.
/// Throws InvalidArgument when the neglected tail term exceeds quad_tol.
double bubble_sobolev_quotient(int dimension, double scale, double truncation, double quad_tol);

/// Best Sobolev constant S, realized as the quotient of the unit bubble.
double sobolev_constant(int dimension, double truncation = 1.0e4, double quad_tol = 1.0e-9);

SpectralConstants spectral_constants(const BallGeometry& geom);

}  // namespace kirchhoff
