#pragma once

// Fredholm data of a strictly local operator with asymptotically periodic
// coefficients: the operator is Fredholm exactly when both per-side symbol
// determinants stay away from the origin on the unit circle, and then its
// index is wn(det of the right symbol) - wn(det of the left symbol).

#include <optional>
#include <string>
#include <vector>

#include "chiralwalk/lattice.hpp"
#include "chiralwalk/winding.hpp"

namespace chiralwalk {

struct FredholmOptions {
  int samples = 1024;
  int adaptive_budget = 16;
  double min_modulus_tol = 1e-9;
  // Minima below near_degenerate_factor * min_modulus_tol refuse a verdict
  // instead of guessing.
  double near_degenerate_factor = 10.0;
};

struct SideDiagnostics {
  double min_abs_det = 0.0;
  std::optional<int> winding;
  std::vector<std::string> warnings;
};

struct IndexReport {
  bool fredholm = false;
  std::optional<int> wn_left;
  std::optional<int> wn_right;
  std::optional<int> index;  // wn_right - wn_left, present iff fredholm
  double min_abs_det = 0.0;  // min across both sides
  SideDiagnostics left;
  SideDiagnostics right;
  std::vector<std::string> warnings;
};

namespace detail {

inline SideDiagnostics scan_side(const StrictlyLocalOperatorSpec& op,
                                 Side side, const FredholmOptions& opt) {
  CircleCurve curve;
  curve.evaluator = [&op, side](Complex z) {
    return determinant(symbol_at(op, side, z));
  };
  curve.sample_count = opt.samples;
  curve.adaptive_budget = opt.adaptive_budget;
  const WindingScan scan = winding_scan(curve, opt.min_modulus_tol);
  SideDiagnostics diag;
  diag.min_abs_det = scan.min_abs;
  if (scan.failure == ErrorCode::CurveThroughOrigin) {
    diag.warnings.push_back(std::string("CurveThroughOrigin:") +
                            side_name(side));
  } else if (scan.failure == ErrorCode::RefinementExhausted) {
    diag.warnings.push_back(std::string("RefinementExhausted:") +
                            side_name(side));
  } else {
    diag.winding = scan.winding;
    if (scan.min_abs <
        opt.near_degenerate_factor * opt.min_modulus_tol) {
      diag.winding.reset();
      diag.warnings.push_back(std::string("NearDegenerate:") +
                              side_name(side));
    }
  }
  return diag;
}

}  // namespace detail

inline IndexReport fredholm_index(const StrictlyLocalOperatorSpec& op,
                                  const FredholmOptions& opt = {}) {
  IndexReport report;
  report.left = detail::scan_side(op, Side::Left, opt);
  report.right = detail::scan_side(op, Side::Right, opt);
  report.min_abs_det =
      std::min(report.left.min_abs_det, report.right.min_abs_det);
  for (const auto& w : report.left.warnings) report.warnings.push_back(w);
  for (const auto& w : report.right.warnings) report.warnings.push_back(w);
  report.fredholm =
      report.left.winding.has_value() && report.right.winding.has_value();
  if (report.fredholm) {
    report.wn_left = report.left.winding;
    report.wn_right = report.right.winding;
    report.index = *report.wn_right - *report.wn_left;
  }
  return report;
}

}  // namespace chiralwalk
