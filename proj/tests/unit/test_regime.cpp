#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "kirchhoff/constants.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/regime.hpp"

using namespace kirchhoff;

namespace {

// Ground levels on the unit ball of R^3 (Nehari oracle, M = 2000), frozen.
constexpr double kM0p4 = 25.59315018;
constexpr double kM0p3 = 230.68634524;
constexpr double kM0p45 = 15.18676526;

ProblemParams ball(int n, double q, double p) {
  ProblemParams prm;
  prm.geom = {n, 1.0};
  prm.q = q;
  prm.p = p;
  return prm;
}

// b giving a two-root left side of `target` for q = 2, p = 3, N = 3, other parameters fixed
double two_root_b(ProblemParams prm, const SpectralConstants& c, double target) {
  prm.b = 1e-6;  // small enough for the two-root case to match
  const double lhs = classify(prm, c, kM0p3).aux.twoRootLhs;
  return prm.b * std::pow(target / lhs, 2.0 / (prm.p - 2.0));
}

}  // namespace

TEST_CASE("describe_case intervals") {
  const auto c3 = spectral_constants({3, 1.0});
  auto prm = ball(3, 2.0, 4.0);
  auto d = describe_case(prm, c3);
  CHECK(d.id == CaseId::Q2_SUB);
  CHECK(d.interval.lower == 0.0);
  CHECK(d.interval.upper == doctest::Approx(c3.lambda1));

  prm = ball(3, 2.0, 6.0);
  d = describe_case(prm, c3);
  CHECK(d.id == CaseId::Q2_CRIT);
  CHECK(d.interval.lower == doctest::Approx(c3.lambda1 / 4.0));
  CHECK(d.interval.lowerLabel == "lambda1/4");

  prm = ball(3, 3.0, 6.0);
  CHECK_THROWS_AS(describe_case(prm, c3), InvalidArgument);
  d = describe_case(prm, c3, 2.5);
  CHECK(d.id == CaseId::QGT2_CRIT);
  CHECK(d.interval.lower == 2.5);
  CHECK(std::isinf(d.interval.upper));

  prm = ball(3, 2.2, 3.0);
  d = describe_case(prm, c3);
  CHECK(d.id == CaseId::QGT2_SUB);
  REQUIRE(d.radiality.size() == 1);
  CHECK_FALSE(d.radiality[0].holds);  // (q-1)(p+1) = 4.8 > 3/2

  const auto c4 = spectral_constants({4, 1.0});
  d = describe_case(ball(4, 2.0, 4.0), c4);
  CHECK(d.id == CaseId::Q2_CRIT);
  CHECK(d.interval.lower == 0.0);
}

TEST_CASE("classify examples") {
  const auto c3 = spectral_constants({3, 1.0});
  const double lam1 = c3.lambda1;

  SUBCASE("p > 4 below a lambda1") {
    auto prm = ball(3, 2.0, 4.5);
    prm.b = 0.5;
    prm.lambda = 0.5 * lam1;
    const auto pred = classify(prm, c3, kM0p45);
    REQUIRE(pred.matchedCase);
    CHECK(*pred.matchedCase == "p>4, lambda<a*lambda1");
    CHECK(pred.guaranteedCount == 1);
    CHECK(*pred.lowerLimit.value == 0.0);
    CHECK(*pred.upperLimit.value == doctest::Approx(2.0));
  }

  SUBCASE("p = 4 with 4 m0 b / mu = 1/2") {
    auto prm = ball(3, 2.0, 4.0);
    prm.b = 0.5 / (4.0 * kM0p4);
    prm.lambda = 0.5 * lam1;
    const auto pred = classify(prm, c3, kM0p4);
    CHECK(*pred.matchedCase == "p=4, lambda<a*lambda1, 2p/(p-2) m0 b/mu<1");
    CHECK(pred.guaranteedCount == 1);
    CHECK(*pred.lowerLimit.value == doctest::Approx(0.5));
  }

  SUBCASE("N = 4 critical with mu = 2 b S^2") {
    const auto c4 = spectral_constants({4, 1.0});
    auto prm = ball(4, 2.0, 4.0);
    prm.b = 0.01;
    prm.lambda = 0.5 * c4.lambda1;
    prm.mu = 2.0 * prm.b * c4.sobolevS * c4.sobolevS;
    const auto pred = classify(prm, c4, NAN);
    CHECK(*pred.matchedCase == "N=4, lambda<a*lambda1, mu>b*S^2");
    CHECK(*pred.lowerLimit.value == doctest::Approx(0.5));
  }

  SUBCASE("boundary and unmatched parameters") {
    auto prm = ball(3, 2.0, 4.5);
    prm.lambda = lam1;
    CHECK_THROWS_AS(classify(prm, c3, kM0p45), UnsupportedRegime);
    // p = 4 above a lambda1 with 4 m0 b / mu < 1 is in none of the cases
    prm = ball(3, 2.0, 4.0);
    prm.b = 0.5 / (4.0 * kM0p4);
    prm.lambda = 1.5 * lam1;
    CHECK_THROWS_AS(classify(prm, c3, kM0p4), UnsupportedRegime);
  }

  SUBCASE("two-root case and its probe") {
    auto prm = ball(3, 2.0, 3.0);
    prm.lambda = 0.5 * lam1;
    prm.b = two_root_b(prm, c3, 0.5);
    const auto pred = classify(prm, c3, kM0p3);
    CHECK(*pred.matchedCase == "p<4, lambda<a*lambda1, two-root inequality");
    CHECK(pred.guaranteedCount == 2);
    CHECK(pred.aux.twoRootLhs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(majorant_minimum(prm, pred.aux.C) == doctest::Approx(pred.aux.twoRootLhs).epsilon(1e-12));
    REQUIRE(pred.probeAlpha);
    CHECK(pred.caseInfo.interval.contains(*pred.probeAlpha));
  }
}

TEST_CASE("majorant and limits of f") {
  auto prm = ball(3, 2.0, 3.0);
  prm.b = 0.01;
  prm.lambda = 4.0;
  CHECK_THROWS_AS(majorant_minimum(ball(3, 2.0, 4.0), 1.0), InvalidArgument);
  // the probe minimizes a y + B y^{-1}; both sides of it are larger
  const double alpha = majorant_probe(prm, 100.0);
  auto majorant = [&](double al) {
    const double y = al / prm.lambda;
    return prm.a * y + prm.b * 100.0 / (prm.mu * prm.mu) / y;
  };
  CHECK(majorant(alpha) == doctest::Approx(majorant_minimum(prm, 100.0)).epsilon(1e-12));
  CHECK(majorant(1.01 * alpha) > majorant(alpha));
  CHECK(majorant(0.99 * alpha) > majorant(alpha));

  CHECK(std::isinf(f_limit(0.0, 5.0, prm)));
  CHECK(f_limit(0.0, 5.0, ball(3, 2.0, 4.5)) == 0.0);
  auto p4 = ball(3, 2.0, 4.0);
  p4.b = 0.1;
  p4.mu = 2.0;
  CHECK(f_limit(0.0, 5.0, p4) == doctest::Approx(0.25));
  p4.lambda = 2.0;
  CHECK(f_limit(1.0, 0.0, p4) == doctest::Approx(0.5));
  CHECK(alpha_first_term_bound(p4) == doctest::Approx(2.0));
}

TEST_CASE("sampled f near the endpoints") {
  const auto c3 = spectral_constants({3, 1.0});
  auto prm = ball(3, 2.0, 3.0);
  prm.b = 0.01;
  prm.lambda = 0.5 * c3.lambda1;
  LocalSolver solver(prm);
  const std::vector<double> grid = {1e-4 * c3.lambda1, 0.999 * c3.lambda1};
  const auto s = sample_f(solver, prm, grid, 2);
  REQUIRE(s.size() == 2);
  REQUIRE(s[0].f);
  REQUIRE(s[1].f);
  CHECK(*s[0].f > 10.0);
  CHECK(*s[1].f == doctest::Approx(prm.a * c3.lambda1 / prm.lambda).epsilon(0.01));
  CHECK(s[0].alpha == grid[0]);

  const auto empty = sample_f(solver, prm, std::vector<double>{1.5 * c3.lambda1});
  CHECK_FALSE(empty[0].f);
  CHECK_FALSE(empty[0].failure.empty());
}

TEST_CASE("find_roots") {
  const auto c3 = spectral_constants({3, 1.0});

  SUBCASE("b -> 0 reproduces alpha = lambda / a") {
    auto prm = ball(3, 2.0, 4.0);
    prm.b = 1e-12;
    prm.lambda = 3.0;
    LocalSolver solver(prm);
    const auto rep = find_roots(solver, prm, c3, kM0p4);
    REQUIRE(rep.roots.size() == 1);
    CHECK(rep.roots[0].alpha == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(rep.agreement);
  }

  SUBCASE("two roots separated by the probe") {
    auto prm = ball(3, 2.0, 3.0);
    prm.lambda = 0.5 * c3.lambda1;
    prm.b = two_root_b(prm, c3, 0.5);
    LocalSolver solver(prm);
    RootSearchOptions opt;
    opt.workers = 2;
    const auto rep = find_roots(solver, prm, c3, kM0p3, opt);
    CHECK(rep.numericCount == 2);
    CHECK(rep.agreement);
    REQUIRE(rep.probeSeparates);
    CHECK(*rep.probeSeparates);
    REQUIRE(rep.solutions.size() == 2);
    for (const auto& sol : rep.solutions) {
      CHECK(std::fabs(sol.fValue - 1.0) <= 1e-8);
      CHECK(sol.residual <= 1e-6);
    }
  }

  SUBCASE("p < 4 above a lambda1") {
    auto prm = ball(3, 2.0, 3.0);
    prm.b = 0.5;
    prm.lambda = 1.5 * c3.lambda1;
    LocalSolver solver(prm);
    const auto rep = find_roots(solver, prm, c3, kM0p3);
    CHECK(rep.numericCount >= 1);
    CHECK(rep.agreement);
  }

  SUBCASE("scan range") {
    auto prm = ball(3, 2.0, 4.0);
    prm.lambda = 0.5 * c3.lambda1;
    const auto iv = describe_case(prm, c3).interval;
    const auto r = default_scan_range(iv, prm, {});
    CHECK(r.capped);
    CHECK(r.hi == doctest::Approx(alpha_first_term_bound(prm)));
    CHECK(r.lo == doctest::Approx(1e-4 * r.hi));
    RootSearchOptions bad;
    bad.alphaMax = 2.0 * c3.lambda1;
    CHECK_THROWS_AS(default_scan_range(iv, prm, bad), InvalidArgument);
  }
}

TEST_CASE("endpoint limits for p = 4") {
  const auto c3 = spectral_constants({3, 1.0});
  auto prm = ball(3, 2.0, 4.0);
  prm.b = 0.5 / (4.0 * kM0p4);
  prm.lambda = 0.5 * c3.lambda1;
  LocalSolver solver(prm);
  LimitOptions opt;
  opt.workers = 2;
  const auto upper = verify_limits(solver, Endpoint::Upper, prm, c3, kM0p4, opt);
  CHECK(upper.relativeError <= 0.01);
  REQUIRE(upper.fExtrapolated);
  CHECK(*upper.fExtrapolated == doctest::Approx(2.0).epsilon(0.01));
  const auto lower = verify_limits(solver, Endpoint::Lower, prm, c3, kM0p4, opt);
  CHECK(lower.relativeError <= 0.01);
  CHECK(lower.predicted == doctest::Approx(4.0 * kM0p4));
}

TEST_CASE("Hoelder bound on D") {
  const auto c3 = spectral_constants({3, 1.0});
  for (auto [p, m0] : {std::pair{4.0, kM0p4}, std::pair{3.0, kM0p3}}) {
    CAPTURE(p);
    auto prm = ball(3, 2.0, p);
    LocalSolver solver(prm);
    const auto grid = log_grid(0.01 * c3.lambda1, 0.99 * c3.lambda1, 8);
    const auto rep = holder_bound_check(solver, prm, c3, m0, grid, 0.01, 2);
    CHECK(rep.allSatisfied);
    REQUIRE(rep.points.size() == grid.size());
    for (std::size_t i = 1; i < rep.points.size(); ++i) CHECK(rep.points[i].margin > rep.points[i - 1].margin);
  }
  const auto q3 = ball(3, 3.0, 4.0);
  LocalSolver other(q3);
  CHECK_THROWS_AS(holder_bound_check(other, q3, c3, kM0p4, std::vector<double>{1.0}), InvalidArgument);
}
