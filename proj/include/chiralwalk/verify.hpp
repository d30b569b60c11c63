#pragma once

// Self-check suites run by the `verify` command: each check measures a
// defect that the theory says must vanish (to rounding) and compares it
// against a fixed tolerance.

#include <string>
#include <vector>

#include "chiralwalk/eigenstate.hpp"
#include "chiralwalk/oracle.hpp"
#include "chiralwalk/splitstep.hpp"

namespace chiralwalk {

struct VerifyCheck {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline bool all_pass(const std::vector<VerifyCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace detail {

inline VerifyCheck make_check(std::string name, double defect, double tol) {
  VerifyCheck c;
  c.name = std::move(name);
  c.defect = defect;
  c.tolerance = tol;
  c.pass = defect <= tol;
  return c;
}

// One side's tails extended over the whole lattice as a purely periodic model.
inline SplitStepModel side_pure_model(const SplitStepModel& model, Side side) {
  const auto& pt =
      side == Side::Left ? model.p.left_tail() : model.p.right_tail();
  const auto& at =
      side == Side::Left ? model.a.left_tail() : model.a.right_tail();
  return SplitStepModel(ScalarSequence(pt, pt), ScalarSequence(at, at));
}

}  // namespace detail

// Full suite for a split-step model, with the operators supplied explicitly
// so corrupted tables can be injected by tests.
inline std::vector<VerifyCheck> verify_split_step_operators(
    const SplitStepModel& model, const StrictlyLocalOperatorSpec& gamma,
    const StrictlyLocalOperatorSpec& u, int z_samples, int oracle_cells) {
  std::vector<VerifyCheck> checks;
  const double two_pi = 2.0 * std::numbers::pi;

  double unitary = 0.0, chiral = 0.0;
  for (Side side : {Side::Left, Side::Right}) {
    for (int t = 0; t < z_samples; ++t) {
      const Complex z = std::polar(1.0, two_pi * t / z_samples);
      const ComplexMatrix us = symbol_at(u, side, z);
      const ComplexMatrix gs = symbol_at(gamma, side, z);
      unitary = std::max(unitary, unitarity_defect(us));
      chiral = std::max(
          chiral,
          (us.adjoint() - gs * us * gs).cwiseAbs().maxCoeff());
    }
  }
  checks.push_back(detail::make_check("symbol_unitarity", unitary, 1e-12));
  checks.push_back(detail::make_check("chiral_identity", chiral, 1e-12));

  const HalfStepBlocks blocks = half_step_blocks(model);
  double det_gap = 0.0;
  for (Side side : {Side::Left, Side::Right}) {
    for (ChiralSign sign : {ChiralSign::Plus, ChiralSign::Minus}) {
      for (int t = 0; t < z_samples; ++t) {
        const Complex z = std::polar(1.0, two_pi * t / z_samples);
        const Complex closed = blocks.closed_determinant(side, sign, z);
        const Complex numeric =
            determinant(symbol_at(blocks.first_block(sign), side, z));
        det_gap = std::max(det_gap, std::abs(closed - numeric) /
                                        std::max(1.0, std::abs(closed)));
      }
    }
  }
  checks.push_back(detail::make_check("det_closed_form", det_gap, 1e-12));

  double ring_gap = 0.0;
  for (Side side : {Side::Left, Side::Right}) {
    const SplitStepModel pure = detail::side_pure_model(model, side);
    const StrictlyLocalOperatorSpec u_pure = evolution_operator(pure);
    const auto ring = oracle::circulant_spectrum(u_pure, side, oracle_cells);
    const auto sym = oracle::symbol_union_spectrum(u_pure, side, oracle_cells);
    ring_gap = std::max(ring_gap, oracle::multiset_distance(ring, sym));
  }
  checks.push_back(detail::make_check("circulant_equality", ring_gap, 1e-9));

  const SignedIndexReport report = index_pm(model);
  const double route_gap =
      (report.plus.routes_agree && report.minus.routes_agree) ? 0.0 : 1.0;
  checks.push_back(detail::make_check("index_cross_check", route_gap, 0.5));
  return checks;
}

inline std::vector<VerifyCheck> verify_split_step(const SplitStepModel& model,
                                                  int z_samples = 64,
                                                  int oracle_cells =
                                                      oracle::kDefaultCells) {
  return verify_split_step_operators(model, gamma_operator(model),
                                     evolution_operator(model), z_samples,
                                     oracle_cells);
}

// Generic suite for raw strictly local operators: structural validation,
// the adjoint-symbol identity, the ring-vs-symbol-union identity when the
// operator is purely periodic, and (when declared) unitarity of the symbol.
inline std::vector<VerifyCheck> verify_strictly_local(
    const StrictlyLocalOperatorSpec& op, bool expect_unitary,
    int z_samples = 64, int oracle_cells = oracle::kDefaultCells) {
  std::vector<VerifyCheck> checks;
  const double two_pi = 2.0 * std::numbers::pi;

  const ValidationReport vr = validate(op);
  checks.push_back(detail::make_check(
      "validate", static_cast<double>(vr.violations.size()), 0.5));

  const StrictlyLocalOperatorSpec adj = adjoint(op);
  double adj_gap = 0.0, unitary = 0.0;
  for (Side side : {Side::Left, Side::Right}) {
    for (int t = 0; t < z_samples; ++t) {
      const Complex z = std::polar(1.0, two_pi * t / z_samples);
      const ComplexMatrix s = symbol_at(op, side, z);
      adj_gap = std::max(adj_gap, (symbol_at(adj, side, z) - s.adjoint())
                                      .cwiseAbs()
                                      .maxCoeff());
      if (expect_unitary) unitary = std::max(unitary, unitarity_defect(s));
    }
  }
  checks.push_back(detail::make_check("adjoint_symbol", adj_gap, 1e-12));
  if (expect_unitary)
    checks.push_back(detail::make_check("symbol_unitarity", unitary, 1e-12));

  bool pure = true;
  for (int k = -op.bandwidth(); k <= op.bandwidth() && pure; ++k)
    pure = op.coeff(k).core_values().empty();
  if (pure) {
    double ring_gap = 0.0;
    for (Side side : {Side::Left, Side::Right}) {
      const auto ring = oracle::circulant_spectrum(op, side, oracle_cells);
      const auto sym = oracle::symbol_union_spectrum(op, side, oracle_cells);
      ring_gap = std::max(ring_gap, oracle::multiset_distance(ring, sym));
    }
    checks.push_back(detail::make_check("circulant_equality", ring_gap, 1e-9));
  }
  return checks;
}

}  // namespace chiralwalk
