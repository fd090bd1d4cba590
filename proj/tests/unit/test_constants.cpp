#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kirchhoff/constants.hpp"
#include "kirchhoff/errors.hpp"
#include "oracles.hpp"

using namespace kirchhoff;
using std::numbers::pi;
using oracle::linear_shooting_eigenvalue;
using oracle::series_bisection_zero;

// Reference values (mpmath, 30 digits).
constexpr double kJ1 = 3.8317059702075123156;
constexpr double kJ15 = 4.4934094579090641753;
constexpr double kJ2 = 5.1356223018406825563;
constexpr double kS3 = 5.4779040895313318736;
constexpr double kS4 = 10.260398641294912764;
constexpr double kS5 = 14.811911720005934;

TEST_CASE("bessel zeros") {
  CHECK(bessel_first_zero(0.5) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(bessel_first_zero(1.0) == doctest::Approx(kJ1).epsilon(1e-13));
  CHECK(bessel_first_zero(1.5) == doctest::Approx(kJ15).epsilon(1e-13));
  CHECK(bessel_first_zero(2.0) == doctest::Approx(kJ2).epsilon(1e-13));
  for (double nu : {0.5, 1.0, 1.5, 2.0, 3.5}) {
    CAPTURE(nu);
    CHECK(bessel_first_zero(nu) == doctest::Approx(series_bisection_zero(nu)).epsilon(1e-8));
  }
}

TEST_CASE("the multiprecision oracle reproduces the frozen zeros") {
  CHECK(series_bisection_zero(1.0) == doctest::Approx(kJ1).epsilon(1e-14));
  CHECK(series_bisection_zero(1.5) == doctest::Approx(kJ15).epsilon(1e-14));
}

TEST_CASE("first eigenvalue") {
  CHECK(first_eigenvalue({3, 1.0}) == doctest::Approx(pi * pi).epsilon(1e-14));
  CHECK(first_eigenvalue({3, 2.0}) == doctest::Approx(pi * pi / 4).epsilon(1e-14));
  CHECK(first_eigenvalue({4, 1.0}) == doctest::Approx(kJ1 * kJ1).epsilon(1e-13));
  CHECK(first_eigenvalue({4, 1.0}) == doctest::Approx(linear_shooting_eigenvalue(4, 1.0)).epsilon(1e-8));
  CHECK(first_eigenvalue({3, 1.0}) == doctest::Approx(linear_shooting_eigenvalue(3, 1.0)).epsilon(1e-8));

  for (int n : {3, 4, 5, 6}) {
    const double ref = first_eigenvalue({n, 1.0});
    for (double r : {0.5, 2.0}) {
      CHECK(first_eigenvalue({n, r}) * r * r == doctest::Approx(ref).epsilon(1e-15));
    }
  }
}

TEST_CASE("sphere area and ball volume") {
  CHECK(sphere_area(3) == doctest::Approx(4 * pi));
  CHECK(sphere_area(2) == doctest::Approx(2 * pi));
  CHECK(sphere_area(4) == doctest::Approx(2 * pi * pi));
  // omega_{N+1} = 2 pi omega_{N-1} / N
  for (int n = 3; n <= 6; ++n) {
    CHECK(sphere_area(n + 2) == doctest::Approx(2 * pi * sphere_area(n) / n).epsilon(1e-14));
  }
  CHECK(ball_volume({3, 2.0}) == doctest::Approx(4.0 / 3.0 * pi * 8.0));
  CHECK(critical_exponent(3) == 6.0);
  CHECK(critical_exponent(5) == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("sobolev constant") {
  CHECK(sobolev_constant(3) == doctest::Approx(kS3).epsilon(1e-9));
  CHECK(sobolev_constant(4) == doctest::Approx(kS4).epsilon(1e-9));
  CHECK(sobolev_constant(5) == doctest::Approx(kS5).epsilon(1e-9));
  CHECK(sobolev_constant(3) == doctest::Approx(oracle::trapezoid_sobolev(3)).epsilon(1e-6));

  SUBCASE("truncation independence") {
    CHECK(sobolev_constant(4, 1.0e4) == doctest::Approx(sobolev_constant(4, 1.0e5)).epsilon(1e-6));
  }
  SUBCASE("scale invariance") {
    const double s1 = bubble_sobolev_quotient(4, 1.0, 1.0e4, 1e-9);
    const double s2 = bubble_sobolev_quotient(4, 2.0, 1.0e4, 1e-9);
    CHECK(s2 == doctest::Approx(s1).epsilon(1e-8));
  }
  SUBCASE("short truncation is rejected") { CHECK_THROWS_AS(sobolev_constant(3, 5.0, 1e-12), InvalidArgument); }
}

TEST_CASE("spectral constants bundle") {
  const auto c = spectral_constants({4, 1.0});
  CHECK(c.lambda1 == doctest::Approx(kJ1 * kJ1));
  CHECK(c.sobolevS == doctest::Approx(kS4).epsilon(1e-9));
  CHECK(c.sphereArea == doctest::Approx(2 * pi * pi));
  CHECK_THROWS_AS(spectral_constants({2, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(spectral_constants({3, -1.0}), InvalidArgument);
}
