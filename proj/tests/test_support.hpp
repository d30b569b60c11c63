#pragma once

// Shared builders for the test suites: random periodic sequences and
// operators with controlled structure (banded, self-adjoint, periodic).

#include <complex>
#include <random>
#include <vector>

#include "chiralwalk/lattice.hpp"
#include "chiralwalk/splitstep.hpp"

namespace testsupport {

using chiralwalk::Complex;
using chiralwalk::ComplexSequence;
using chiralwalk::ScalarSequence;
using chiralwalk::StrictlyLocalOperatorSpec;

inline ComplexSequence const_seq(Complex v) {
  return ComplexSequence::constant(v);
}

inline std::vector<Complex> random_complex_tail(int period,
                                                std::mt19937_64& rng,
                                                double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<Complex> out;
  for (int i = 0; i < period; ++i) out.emplace_back(dist(rng), dist(rng));
  return out;
}

inline std::vector<Complex> random_real_tail(int period, std::mt19937_64& rng,
                                             double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<Complex> out;
  for (int i = 0; i < period; ++i) out.emplace_back(dist(rng), 0.0);
  return out;
}

// Purely periodic scalar sequence: one tail table reused on both sides.
inline ComplexSequence periodic_seq(std::vector<Complex> tail) {
  return ComplexSequence(tail, tail);
}

// Random purely periodic 1-dimensional banded operator (period p on both
// sides, empty core).
inline StrictlyLocalOperatorSpec random_periodic_scalar_op(
    int k0, int period, std::mt19937_64& rng) {
  std::vector<ComplexSequence> coeffs;
  for (int k = -k0; k <= k0; ++k)
    coeffs.push_back(periodic_seq(random_complex_tail(period, rng)));
  return chiralwalk::scalar_operator(std::move(coeffs));
}

// Random purely periodic formally self-adjoint 1-dimensional operator with
// k0 = 1: diagonal real, lower coefficient tied to the upper one by the
// adjoint rule a_{-1}(x) = conj(a_1(x-1)).
inline StrictlyLocalOperatorSpec random_periodic_selfadjoint_op(
    int period, std::mt19937_64& rng) {
  ComplexSequence upper = periodic_seq(random_complex_tail(period, rng));
  ComplexSequence diag = periodic_seq(random_real_tail(period, rng));
  ComplexSequence lower = upper.shifted(-1).map(
      [](Complex v) -> Complex { return std::conj(v); });
  return chiralwalk::scalar_operator({lower, diag, upper});
}

// Random banded spec with a genuine core and distinct tail periods.
inline StrictlyLocalOperatorSpec random_banded_spec(int n, int k0,
                                                    int left_period,
                                                    int right_period,
                                                    int core_len,
                                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto random_matrix = [&](int dim) {
    chiralwalk::ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
    return m;
  };
  std::vector<chiralwalk::MatrixSequence> coeffs;
  for (int k = -k0; k <= k0; ++k) {
    std::vector<chiralwalk::ComplexMatrix> left, right, core;
    for (int m = 0; m < left_period; ++m) left.push_back(random_matrix(n));
    for (int m = 0; m < right_period; ++m) right.push_back(random_matrix(n));
    for (int m = 0; m < core_len; ++m) core.push_back(random_matrix(n));
    coeffs.emplace_back(std::move(left), std::move(right), -1,
                        std::move(core));
  }
  return StrictlyLocalOperatorSpec(n, k0, std::move(coeffs));
}

inline chiralwalk::ScalarSequence random_scalar_tails(int nl, int nr,
                                                      int core_len,
                                                      std::mt19937_64& rng,
                                                      double amp = 0.9) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> left, right, core;
  for (int i = 0; i < nl; ++i) left.push_back(dist(rng));
  for (int i = 0; i < nr; ++i) right.push_back(dist(rng));
  for (int i = 0; i < core_len; ++i) core.push_back(dist(rng));
  return chiralwalk::ScalarSequence(std::move(left), std::move(right),
                                    -(core_len / 2), std::move(core));
}

inline chiralwalk::SplitStepModel random_split_step_model(
    int nl, int nr, int core_len, std::mt19937_64& rng, double amp = 0.9) {
  return chiralwalk::SplitStepModel(
      random_scalar_tails(nl, nr, core_len, rng, amp),
      random_scalar_tails(nl, nr, core_len, rng, amp));
}

// p jumps from p_left to p_right at the origin, a identically zero.
inline chiralwalk::SplitStepModel domain_wall_model(double p_left,
                                                    double p_right) {
  return chiralwalk::SplitStepModel(
      chiralwalk::ScalarSequence({p_left}, {p_right}, 0, {}),
      chiralwalk::ScalarSequence::constant(0.0));
}

}  // namespace testsupport
