#pragma once

// Winding numbers of closed curves about the origin, by cumulative
// principal-argument tracking with adaptive bisection. Orientation is
// counterclockwise positive with t: 0 -> 2*pi, so wn(z) = +1.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>

#include "chiralwalk/error.hpp"
#include "chiralwalk/numkernel.hpp"

namespace chiralwalk {

struct CircleCurve {
  std::function<Complex(Complex)> evaluator;
  int sample_count = 1024;
  int adaptive_budget = 16;  // max bisection depth per sample step
};

// Non-throwing scan result, used by callers that map failures to verdicts.
struct WindingScan {
  std::optional<int> winding;
  double min_abs = std::numeric_limits<double>::infinity();
  std::optional<ErrorCode> failure;  // CurveThroughOrigin / RefinementExhausted
};

namespace detail {

class WindingTracker {
 public:
  WindingTracker(const CircleCurve& c, double tol) : curve_(c), tol_(tol) {}

  WindingScan run() {
    const double two_pi = 2.0 * std::numbers::pi;
    const int m = std::max(4, curve_.sample_count);
    double total = 0.0;
    double theta0 = 0.0;
    Complex f0 = eval(theta0);
    const Complex f_first = f0;
    for (int t = 1; t <= m && !scan_.failure; ++t) {
      const double theta1 = two_pi * t / m;
      const Complex f1 = t == m ? f_first : eval(theta1);
      total += arg_step(theta0, f0, theta1, f1, 0);
      theta0 = theta1;
      f0 = f1;
    }
    if (scan_.failure) return scan_;
    const double w = total / two_pi;
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 1e-6) {
      scan_.failure = ErrorCode::RefinementExhausted;
      return scan_;
    }
    scan_.winding = static_cast<int>(rounded);
    return scan_;
  }

 private:
  Complex eval(double theta) {
    const Complex f = curve_.evaluator(std::polar(1.0, theta));
    const double a = std::abs(f);
    scan_.min_abs = std::min(scan_.min_abs, a);
    if (a < tol_ && !scan_.failure) scan_.failure = ErrorCode::CurveThroughOrigin;
    return f;
  }

  double arg_step(double theta0, Complex f0, double theta1, Complex f1,
                  int depth) {
    if (scan_.failure) return 0.0;
    const double delta = std::arg(f1 / f0);
    if (std::abs(delta) < std::numbers::pi / 2.0) return delta;
    if (depth >= curve_.adaptive_budget) {
      scan_.failure = ErrorCode::RefinementExhausted;
      return 0.0;
    }
    const double mid = (theta0 + theta1) / 2.0;
    const Complex fm = eval(mid);
    if (scan_.failure) return 0.0;
    return arg_step(theta0, f0, mid, fm, depth + 1) +
           arg_step(mid, fm, theta1, f1, depth + 1);
  }

  const CircleCurve& curve_;
  double tol_;
  WindingScan scan_;
};

}  // namespace detail

inline WindingScan winding_scan(const CircleCurve& c, double min_modulus_tol) {
  return detail::WindingTracker(c, min_modulus_tol).run();
}

inline int winding_number(const CircleCurve& c, double min_modulus_tol = 1e-9) {
  const WindingScan scan = winding_scan(c, min_modulus_tol);
  if (scan.failure == ErrorCode::CurveThroughOrigin)
    throw Error(ErrorCode::CurveThroughOrigin,
                "curve modulus fell below tolerance (min |f| = " +
                    std::to_string(scan.min_abs) + ")");
  if (scan.failure)
    throw Error(*scan.failure, "argument tracking could not be refined");
  return *scan.winding;
}

}  // namespace chiralwalk
