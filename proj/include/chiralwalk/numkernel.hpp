#pragma once

// Small dense complex-matrix primitives: determinants, Hermitian and general
// eigenvalues, unitarity checks, and the corner-tridiagonal Hermitian
// matrices that arise as symbols of period-m banded self-adjoint operators.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "chiralwalk/error.hpp"

namespace chiralwalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw Error(ErrorCode::NonSquare,
                std::string(who) + " requires a square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_finite(const ComplexMatrix& m, const char* who) {
  if (!m.allFinite())
    throw Error(ErrorCode::NonFinite,
                std::string(who) + ": matrix has non-finite entries");
}

}  // namespace detail

// Entrywise distance from Hermitian symmetry, max |m - m^*|.
inline double hermitian_defect(const ComplexMatrix& m) {
  detail::require_square(m, "hermitian_defect");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Max-norm of m^* m - I.
inline double unitarity_defect(const ComplexMatrix& m) {
  detail::require_square(m, "unitarity_defect");
  detail::require_finite(m, "unitarity_defect");
  ComplexMatrix d = m.adjoint() * m;
  d.diagonal().array() -= 1.0;
  return d.cwiseAbs().maxCoeff();
}

inline constexpr int kDeterminantMaxDim = 256;
inline constexpr int kGeneralEigMaxDim = 64;
inline constexpr double kHermitianTol = 1e-12;

// Determinant via pivoted LU elimination (permutation sign tracked by the
// decomposition).
inline Complex determinant(const ComplexMatrix& m) {
  detail::require_square(m, "determinant");
  detail::require_finite(m, "determinant");
  if (m.rows() > kDeterminantMaxDim)
    throw Error(ErrorCode::TooLarge, "determinant limited to dimension 256");
  if (m.rows() == 1) return m(0, 0);
  return Eigen::PartialPivLU<ComplexMatrix>(m).determinant();
}

// Ascending real eigenvalues of a Hermitian matrix. The input must be
// Hermitian within 1e-12 entrywise; only rounding-level asymmetry is
// expected from symbol assembly.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  detail::require_square(m, "hermitian_eigenvalues");
  detail::require_finite(m, "hermitian_eigenvalues");
  if (hermitian_defect(m) > kHermitianTol)
    throw Error(ErrorCode::NotHermitian,
                "matrix is not Hermitian within 1e-12");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure,
                "Hermitian eigensolver failed to converge");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

struct HermitianEigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns, unit norm
  double backward_error;       // ||m V - V diag(values)||_max
};

inline HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  detail::require_square(m, "hermitian_eigensystem");
  detail::require_finite(m, "hermitian_eigensystem");
  if (hermitian_defect(m) > kHermitianTol)
    throw Error(ErrorCode::NotHermitian,
                "matrix is not Hermitian within 1e-12");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure,
                "Hermitian eigensolver failed to converge");
  HermitianEigensystem out;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  out.vectors = solver.eigenvectors();
  ComplexMatrix resid = m * out.vectors - out.vectors * ev.asDiagonal();
  out.backward_error = resid.cwiseAbs().maxCoeff();
  return out;
}

// All eigenvalues (with multiplicity) of a general square matrix. Symbols of
// non-normal operators land here; dimensions stay small by construction.
inline std::vector<Complex> general_eigenvalues(const ComplexMatrix& m) {
  detail::require_square(m, "general_eigenvalues");
  detail::require_finite(m, "general_eigenvalues");
  if (m.rows() > kGeneralEigMaxDim)
    throw Error(ErrorCode::TooLarge,
                "general_eigenvalues limited to dimension 64");
  if (m.rows() == 1) return {m(0, 0)};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure,
                "general eigensolver failed to converge");
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

// Hermitian band symbol of a period-m tridiagonal operator: diagonal `diag`,
// couplings `off` (off[i] links site i to i+1 mod m), and a unit phase on
// the wrap-around entries. For m = 1 and m = 2 the wrap entries collapse
// onto the same matrix position as the in-band ones, so the realization is
// the scalar off[0] z* + diag[0] + off[0] z, respectively a 2x2 matrix with
// off-diagonal off[0] + off[1] z*.
struct CornerTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  Complex corner_phase{1.0, 0.0};

  int dim() const { return static_cast<int>(diag.size()); }
};

inline ComplexMatrix realize(const CornerTridiagonal& t, Complex z) {
  const int m = t.dim();
  if (m < 1 || t.off.size() != t.diag.size())
    throw Error(ErrorCode::InternalError,
                "corner-tridiagonal data must have matching dimension >= 1");
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw Error(ErrorCode::NonUnitPhase,
                "corner phase must lie on the unit circle");
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i) out(i, i) = t.diag[static_cast<size_t>(i)];
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    const Complex phase = (i + 1 == m) ? z : Complex(1.0, 0.0);
    out(i, j) += t.off[static_cast<size_t>(i)] * phase;
    out(j, i) += t.off[static_cast<size_t>(i)] * std::conj(phase);
  }
  return out;
}

inline ComplexMatrix realize(const CornerTridiagonal& t) {
  return realize(t, t.corner_phase);
}

}  // namespace chiralwalk
