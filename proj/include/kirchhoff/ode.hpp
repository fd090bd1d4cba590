#pragma once

// Adaptive Dormand-Prince 5(4) integrator with fourth-order dense output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff::ode {

template <std::size_t Dim>
using State = std::array<double, Dim>;

struct StepControl {
  double relative = 1.0e-10;
  double absolute = 1.0e-12;
  double initialStep = 0.0;  // 0 picks a step from the local scale of the problem
  double maxStep = 0.0;      // 0 means unbounded
  double minStep = 1.0e-300;
  double magnitudeBound = 1.0e150;
  long maxSteps = 2'000'000;
};

/// One accepted step with its continuous extension.
template <std::size_t Dim>
struct DenseStep {
  double start = 0.0;
  double width = 0.0;
  State<Dim> begin{};
  State<Dim> end{};
  State<Dim> slopeBegin{};
  State<Dim> slopeEnd{};
  std::array<State<Dim>, 5> coeffs{};

  double finish() const { return start + width; }

  State<Dim> eval(double r) const {
    const double th = std::clamp((r - start) / width, 0.0, 1.0);
    const double th1 = 1.0 - th;
    State<Dim> out;
    for (std::size_t i = 0; i < Dim; ++i) {
      out[i] = coeffs[0][i] +
               th * (coeffs[1][i] + th1 * (coeffs[2][i] + th * (coeffs[3][i] + th1 * coeffs[4][i])));
    }
    return out;
  }
};

/// Integrates y' = rhs(r, y) from `start` toward `stop`. After each accepted
/// step `on_step(step)` is called; returning false ends the integration.
/// Returns the radius reached. Throws NonFiniteBlowup when a component leaves
/// the magnitude bound and NotConverged when the step size collapses.
template <std::size_t Dim, typename Rhs, typename OnStep>
double integrate(Rhs&& rhs, double start, State<Dim> y, double stop, const StepControl& ctl, OnStep&& on_step) {
  constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                   a65 = -5103.0 / 18656.0;
  constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                   a76 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                   e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  using S = State<Dim>;
  auto combine = [&](const S& base, double h, std::initializer_list<std::pair<double, const S*>> terms) {
    S out = base;
    for (const auto& [w, k] : terms) {
      for (std::size_t i = 0; i < Dim; ++i) {
        out[i] += h * w * (*k)[i];
      }
    }
    return out;
  };

  double r = start;
  S k1 = rhs(r, y);
  double h = ctl.initialStep;
  if (!(h > 0.0)) {
    double scale_y = 0.0, scale_f = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sc = ctl.absolute + ctl.relative * std::fabs(y[i]);
      scale_y += (y[i] / sc) * (y[i] / sc);
      scale_f += (k1[i] / sc) * (k1[i] / sc);
    }
    h = (scale_y < 1e-10 || scale_f < 1e-10) ? 1e-6 : 0.01 * std::sqrt(scale_y / scale_f);
  }
  if (ctl.maxStep > 0.0) {
    h = std::min(h, ctl.maxStep);
  }

  long steps = 0;
  while (r < stop) {
    if (++steps > ctl.maxSteps) {
      throw NotConverged("ODE step budget exhausted at r = " + std::to_string(r));
    }
    bool last = false;
    if (r + h >= stop) {
      h = stop - r;
      last = true;
    }
    const S k2 = rhs(r + c2 * h, combine(y, h, {{a21, &k1}}));
    const S k3 = rhs(r + c3 * h, combine(y, h, {{a31, &k1}, {a32, &k2}}));
    const S k4 = rhs(r + c4 * h, combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const S k5 = rhs(r + c5 * h, combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const S k6 = rhs(r + h, combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const S y1 = combine(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const S k7 = rhs(r + h, y1);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = ctl.absolute + ctl.relative * std::max(std::fabs(y[i]), std::fabs(y1[i]));
      err += (ei / sc) * (ei / sc);
      finite = finite && std::isfinite(y1[i]);
    }
    err = std::sqrt(err / static_cast<double>(Dim));

    if (!finite || !std::isfinite(err)) {
      h *= 0.2;
      if (h < ctl.minStep) {
        throw NonFiniteBlowup("non-finite ODE state near r = " + std::to_string(r));
      }
      continue;
    }
    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < ctl.minStep) {
        throw NotConverged("ODE step size underflow at r = " + std::to_string(r));
      }
      continue;
    }

    DenseStep<Dim> step;
    step.start = r;
    step.width = h;
    step.begin = y;
    step.end = y1;
    step.slopeBegin = k1;
    step.slopeEnd = k7;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double diff = y1[i] - y[i];
      const double bspl = h * k1[i] - diff;
      step.coeffs[0][i] = y[i];
      step.coeffs[1][i] = diff;
      step.coeffs[2][i] = bspl;
      step.coeffs[3][i] = diff - h * k7[i] - bspl;
      step.coeffs[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }

    r = last ? stop : r + h;
    y = y1;
    k1 = k7;
    for (std::size_t i = 0; i < Dim; ++i) {
      if (std::fabs(y[i]) > ctl.magnitudeBound) {
        throw NonFiniteBlowup("ODE state exceeded magnitude bound near r = " + std::to_string(r));
      }
    }
    if (!on_step(static_cast<const DenseStep<Dim>&>(step))) {
      return r;
    }
    double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (ctl.maxStep > 0.0) {
      h = std::min(h, ctl.maxStep);
    }
  }
  return r;
}

}  // namespace kirchhoff::ode
