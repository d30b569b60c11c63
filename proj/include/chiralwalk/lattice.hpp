#pragma once

// Strictly local operators on l^2(Z, C^n): banded operators
// A = sum_k A_k L^k with matrix coefficients A_k(x) whose sequences have
// exactly periodic tails. Acting pointwise, (A v)(x) = sum_k A_k(x) v(x+k)
// with the left shift convention (L v)(x) = v(x+1).
//
// The per-side Fourier symbol of such an operator is the
// (n n_s) x (n n_s) block matrix whose (i,j) block is
// sum_k diag(a^k_ij(side, 0..n_s-1)) S(z)^k, where S(z) is the n_s-cycle
// shift with the unit phase z on its wrap-around entry. All Fredholm data
// of the operator reduces to this family over the unit circle.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "chiralwalk/error.hpp"
#include "chiralwalk/numkernel.hpp"
#include "chiralwalk/sequence.hpp"

namespace chiralwalk {

enum class Side { Left, Right };

inline const char* side_name(Side s) {
  return s == Side::Left ? "left" : "right";
}

using MatrixSequence = PeriodicTailSequence<ComplexMatrix>;
using ScalarSequence = PeriodicTailSequence<double>;
using ComplexSequence = PeriodicTailSequence<Complex>;

class StrictlyLocalOperatorSpec {
 public:
  // coeffs[k + k0] is the sequence of the coefficient A_k, k in [-k0, k0].
  StrictlyLocalOperatorSpec(int n, int k0, std::vector<MatrixSequence> coeffs)
      : n_(n), k0_(k0), coeffs_(std::move(coeffs)) {
    if (n_ < 1 || k0_ < 0 ||
        coeffs_.size() != static_cast<size_t>(2 * k0_ + 1))
      throw Error(ErrorCode::SchemaError,
                  "operator needs n >= 1, k0 >= 0 and 2 k0 + 1 coefficients");
  }

  int internal_dim() const { return n_; }
  int bandwidth() const { return k0_; }

  const MatrixSequence& coeff(int k) const {
    if (k < -k0_ || k > k0_)
      throw Error(ErrorCode::InternalError, "coefficient index out of band");
    return coeffs_[static_cast<size_t>(k + k0_)];
  }

  ComplexMatrix coeff_at(int k, std::int64_t x) const {
    if (k < -k0_ || k > k0_) return ComplexMatrix::Zero(n_, n_);
    return coeff(k).value_at(x);
  }

  // Common tail period of all coefficients on one side.
  int period(Side side) const {
    int p = 1;
    for (const auto& s : coeffs_)
      p = static_cast<int>(std::lcm(
          p, side == Side::Left ? s.left_period() : s.right_period()));
    return p;
  }

  ComplexMatrix tail_value(int k, Side side, std::int64_t m) const {
    return coeff(k).limit(side == Side::Right, m);
  }

 private:
  int n_;
  int k0_;
  std::vector<MatrixSequence> coeffs_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  ErrorCode code;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::optional<StrictlyLocalOperatorSpec> normalized;
};

namespace detail {

inline bool matrix_finite(const ComplexMatrix& m) { return m.allFinite(); }

inline double matrix_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace detail

// Re-materialize every coefficient on the common tail periods and the common
// core window. Values are unchanged; only the representation is refined.
inline StrictlyLocalOperatorSpec normalized(
    const StrictlyLocalOperatorSpec& op) {
  const int n = op.internal_dim();
  const int k0 = op.bandwidth();
  int nl = 1, nr = 1;
  std::int64_t cs = op.coeff(-k0).core_start();
  std::int64_t ce = op.coeff(-k0).core_end();
  for (int k = -k0; k <= k0; ++k) {
    const auto& s = op.coeff(k);
    nl = static_cast<int>(std::lcm(nl, s.left_period()));
    nr = static_cast<int>(std::lcm(nr, s.right_period()));
    cs = std::min(cs, s.core_start());
    ce = std::max(ce, s.core_end());
  }
  std::vector<MatrixSequence> out;
  out.reserve(static_cast<size_t>(2 * k0 + 1));
  for (int k = -k0; k <= k0; ++k) {
    const auto& s = op.coeff(k);
    std::vector<ComplexMatrix> left, right, core;
    for (int m = 0; m < nl; ++m) left.push_back(s.left_limit(m));
    for (int m = 0; m < nr; ++m) right.push_back(s.right_limit(m));
    for (std::int64_t x = cs; x < ce; ++x) core.push_back(s.value_at(x));
    out.emplace_back(std::move(left), std::move(right), cs, std::move(core));
  }
  return StrictlyLocalOperatorSpec(n, k0, std::move(out));
}

inline ValidationReport validate(const StrictlyLocalOperatorSpec& op) {
  ValidationReport report;
  const int n = op.internal_dim();
  const int k0 = op.bandwidth();
  auto flag = [&](ErrorCode code, std::string detail) {
    report.ok = false;
    report.violations.push_back({code, std::move(detail)});
  };

  int nl = -1, nr = -1;
  std::int64_t cs = 0, ce = 0;
  bool first = true;
  for (int k = -k0; k <= k0; ++k) {
    const auto& s = op.coeff(k);
    auto check_table = [&](const std::vector<ComplexMatrix>& vals,
                           const char* which) {
      for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i].rows() != n || vals[i].cols() != n)
          flag(ErrorCode::SchemaError,
               "coefficient k=" + std::to_string(k) + " " + which + "[" +
                   std::to_string(i) + "] is not " + std::to_string(n) + "x" +
                   std::to_string(n));
        else if (!detail::matrix_finite(vals[i]))
          flag(ErrorCode::NonFinite,
               "coefficient k=" + std::to_string(k) + " " + which + "[" +
                   std::to_string(i) + "] has non-finite entries");
      }
    };
    check_table(s.left_tail(), "left_period");
    check_table(s.right_tail(), "right_period");
    check_table(s.core_values(), "core");
    if (first) {
      nl = s.left_period();
      nr = s.right_period();
      cs = s.core_start();
      ce = s.core_end();
      first = false;
    } else {
      if (s.left_period() != nl || s.right_period() != nr)
        flag(ErrorCode::PeriodMismatch,
             "coefficient k=" + std::to_string(k) +
                 " disagrees on tail periods");
      if (s.core_start() != cs || s.core_end() != ce)
        flag(ErrorCode::PeriodMismatch,
             "coefficient k=" + std::to_string(k) +
                 " disagrees on the core window");
    }
  }
  if (report.ok) report.normalized = normalized(op);
  return report;
}

// ---------------------------------------------------------------------------
// Symbols

inline Complex unit_power(Complex z, std::int64_t k) {
  Complex base = k >= 0 ? z : std::conj(z);  // |z| = 1, so z^-1 = conj(z)
  std::int64_t e = k >= 0 ? k : -k;
  Complex out = 1.0;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

// S(z)^k entry layout: row r holds a single non-zero at column
// (r + k) mod n_s with value z^floor((r + k) / n_s).
inline ComplexMatrix symbol_at(const StrictlyLocalOperatorSpec& op, Side side,
                               Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw Error(ErrorCode::NonUnitPhase, "symbol phase must be unimodular");
  const int n = op.internal_dim();
  const int k0 = op.bandwidth();
  const int ns = op.period(side);
  const int dim = n * ns;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int k = -k0; k <= k0; ++k) {
    for (int r = 0; r < ns; ++r) {
      const int c = phase_mod(r + k, ns);
      const Complex zk = unit_power(z, floor_div(r + k, ns));
      const ComplexMatrix a = op.tail_value(k, side, r);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i * ns + r, j * ns + c) += a(i, j) * zk;
    }
  }
  return out;
}

struct AsymptoticProfile {
  Side side;
  int period;
  // limits[k + k0][m] is the n x n limit matrix along residue m.
  std::vector<std::vector<ComplexMatrix>> limits;
};

inline AsymptoticProfile asymptotic_profile(const StrictlyLocalOperatorSpec& op,
                                            Side side) {
  AsymptoticProfile prof;
  prof.side = side;
  prof.period = op.period(side);
  const int k0 = op.bandwidth();
  for (int k = -k0; k <= k0; ++k) {
    std::vector<ComplexMatrix> row;
    for (int m = 0; m < prof.period; ++m)
      row.push_back(op.tail_value(k, side, m));
    prof.limits.push_back(std::move(row));
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Operator algebra

inline StrictlyLocalOperatorSpec scale(const StrictlyLocalOperatorSpec& op,
                                       Complex c) {
  std::vector<MatrixSequence> coeffs;
  for (int k = -op.bandwidth(); k <= op.bandwidth(); ++k)
    coeffs.push_back(op.coeff(k).map(
        [c](const ComplexMatrix& m) -> ComplexMatrix { return c * m; }));
  return StrictlyLocalOperatorSpec(op.internal_dim(), op.bandwidth(),
                                   std::move(coeffs));
}

inline StrictlyLocalOperatorSpec add(const StrictlyLocalOperatorSpec& a,
                                     const StrictlyLocalOperatorSpec& b) {
  if (a.internal_dim() != b.internal_dim())
    throw Error(ErrorCode::SchemaError, "operator sum needs equal dimensions");
  const int n = a.internal_dim();
  const int k0 = std::max(a.bandwidth(), b.bandwidth());
  const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
  std::vector<MatrixSequence> coeffs;
  for (int k = -k0; k <= k0; ++k) {
    std::vector<MatrixSequence> parts;
    if (std::abs(k) <= a.bandwidth()) parts.push_back(a.coeff(k));
    if (std::abs(k) <= b.bandwidth()) parts.push_back(b.coeff(k));
    if (parts.empty()) {
      coeffs.push_back(MatrixSequence::constant(zero));
    } else {
      coeffs.push_back(zip_sequences<ComplexMatrix>(
          parts, [&](const std::vector<ComplexMatrix>& vs) -> ComplexMatrix {
            ComplexMatrix sum = zero;
            for (const auto& v : vs) sum += v;
            return sum;
          }));
    }
  }
  return StrictlyLocalOperatorSpec(n, k0, std::move(coeffs));
}

// Formal adjoint: A_k(x) |-> A_{-k}(x + k)^*.
inline StrictlyLocalOperatorSpec adjoint(const StrictlyLocalOperatorSpec& op) {
  const int k0 = op.bandwidth();
  std::vector<MatrixSequence> coeffs;
  for (int k = -k0; k <= k0; ++k) {
    coeffs.push_back(op.coeff(-k).shifted(k).map(
        [](const ComplexMatrix& m) -> ComplexMatrix { return m.adjoint(); }));
  }
  return StrictlyLocalOperatorSpec(op.internal_dim(), k0, std::move(coeffs));
}

// Operator product: (AB)_t(x) = sum_k A_k(x) B_{t-k}(x + k).
inline StrictlyLocalOperatorSpec compose(const StrictlyLocalOperatorSpec& a,
                                         const StrictlyLocalOperatorSpec& b) {
  if (a.internal_dim() != b.internal_dim())
    throw Error(ErrorCode::SchemaError,
                "operator product needs equal dimensions");
  const int n = a.internal_dim();
  const int k0 = a.bandwidth() + b.bandwidth();
  const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
  std::vector<MatrixSequence> coeffs;
  for (int t = -k0; t <= k0; ++t) {
    std::vector<MatrixSequence> factors;  // pairs (A_k, B_{t-k} shifted by k)
    for (int k = -a.bandwidth(); k <= a.bandwidth(); ++k) {
      const int kb = t - k;
      if (kb < -b.bandwidth() || kb > b.bandwidth()) continue;
      factors.push_back(a.coeff(k));
      factors.push_back(b.coeff(kb).shifted(k));
    }
    if (factors.empty()) {
      coeffs.push_back(MatrixSequence::constant(zero));
      continue;
    }
    coeffs.push_back(zip_sequences<ComplexMatrix>(
        factors, [&](const std::vector<ComplexMatrix>& vs) -> ComplexMatrix {
          ComplexMatrix sum = zero;
          for (size_t i = 0; i + 1 < vs.size(); i += 2) sum += vs[i] * vs[i + 1];
          return sum;
        }));
  }
  return StrictlyLocalOperatorSpec(n, k0, std::move(coeffs));
}

// Exact coefficient-table distance; zero means the operators are equal.
inline double operator_distance(const StrictlyLocalOperatorSpec& a,
                                const StrictlyLocalOperatorSpec& b) {
  if (a.internal_dim() != b.internal_dim())
    throw Error(ErrorCode::SchemaError,
                "operator comparison needs equal dimensions");
  const int n = a.internal_dim();
  const int k0 = std::max(a.bandwidth(), b.bandwidth());
  const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
  const MatrixSequence zseq = MatrixSequence::constant(zero);
  double worst = 0.0;
  for (int k = -k0; k <= k0; ++k) {
    const MatrixSequence& sa = std::abs(k) <= a.bandwidth() ? a.coeff(k) : zseq;
    const MatrixSequence& sb = std::abs(k) <= b.bandwidth() ? b.coeff(k) : zseq;
    worst = std::max(worst, sequence_distance(sa, sb, detail::matrix_distance));
  }
  return worst;
}

// Widen the band to k0 >= current bandwidth, padding with zero coefficients.
inline StrictlyLocalOperatorSpec with_bandwidth(
    const StrictlyLocalOperatorSpec& op, int k0) {
  if (k0 < op.bandwidth())
    throw Error(ErrorCode::SchemaError, "cannot shrink the bandwidth");
  if (k0 == op.bandwidth()) return op;
  const ComplexMatrix zero =
      ComplexMatrix::Zero(op.internal_dim(), op.internal_dim());
  std::vector<MatrixSequence> coeffs;
  for (int k = -k0; k <= k0; ++k) {
    if (std::abs(k) <= op.bandwidth())
      coeffs.push_back(op.coeff(k));
    else
      coeffs.push_back(MatrixSequence::constant(zero));
  }
  return StrictlyLocalOperatorSpec(op.internal_dim(), k0, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Downsampling

// The m-fold downsampled operator: regroup Z into blocks of m sites, turning
// the n-dimensional operator into an (n m)-dimensional one whose coefficient
// at lattice shift t carries entry ((i,r),(j,c)) = a^k_ij(m y + r) with
// k = t m + c - r. For banded input the result is banded with bandwidth
// ceil(k0 / m); it is exactly unitarily equivalent to the original.
inline StrictlyLocalOperatorSpec downsample(const StrictlyLocalOperatorSpec& op,
                                            int m) {
  if (m < 1) throw Error(ErrorCode::SchemaError, "downsample factor must be >= 1");
  const int n = op.internal_dim();
  const int k0 = op.bandwidth();
  for (int k = -k0; k <= k0; ++k) {
    const auto& s = op.coeff(k);
    if (!s.core_values().empty())
      throw Error(ErrorCode::PeriodMismatch,
                  "downsample requires purely periodic coefficients");
    if (m % s.left_period() != 0 || m % s.right_period() != 0)
      throw Error(ErrorCode::PeriodMismatch,
                  "downsample factor must be a multiple of both tail periods");
  }
  const int nm = n * m;
  const int new_k0 = (k0 + m - 1) / m;
  const ComplexMatrix zero = ComplexMatrix::Zero(nm, nm);

  std::vector<MatrixSequence> coeffs;
  for (int t = -new_k0; t <= new_k0; ++t) {
    // Junction positions differ per row phase r; collect scalar pieces and
    // let the zip engine materialize the common core window.
    std::vector<ComplexSequence> pieces;
    struct Slot {
      int row, col;
    };
    std::vector<Slot> slots;
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        const int k = t * m + c - r;
        if (k < -k0 || k > k0) continue;
        const auto& seq = op.coeff(k);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const Complex lv = seq.left_limit(r)(i, j);
            const Complex rv = seq.right_limit(r)(i, j);
            // g(y) = a^k_ij(m y + r): constant on each side of the junction.
            const std::int64_t junction =
                -floor_div(-(seq.core_start() - r), m);  // ceil((cs - r)/m)
            pieces.emplace_back(std::vector<Complex>{lv},
                                std::vector<Complex>{rv}, junction,
                                std::vector<Complex>{});
            slots.push_back({i * m + r, j * m + c});
          }
        }
      }
    }
    if (pieces.empty()) {
      coeffs.push_back(MatrixSequence::constant(zero));
      continue;
    }
    coeffs.push_back(zip_sequences<ComplexMatrix>(
        pieces, [&](const std::vector<Complex>& vs) -> ComplexMatrix {
          ComplexMatrix out = zero;
          for (size_t s = 0; s < vs.size(); ++s)
            out(slots[s].row, slots[s].col) += vs[s];
          return out;
        }));
  }
  return StrictlyLocalOperatorSpec(nm, new_k0, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Small builders used across the library and tests.

// n = 1 operator from scalar coefficient sequences indexed k = -k0 .. k0.
inline StrictlyLocalOperatorSpec scalar_operator(
    std::vector<ComplexSequence> coeffs) {
  const int k0 = (static_cast<int>(coeffs.size()) - 1) / 2;
  if (coeffs.size() != static_cast<size_t>(2 * k0 + 1))
    throw Error(ErrorCode::SchemaError, "need an odd number of coefficients");
  std::vector<MatrixSequence> mats;
  for (auto& s : coeffs)
    mats.push_back(s.map([](Complex v) -> ComplexMatrix {
      ComplexMatrix m(1, 1);
      m(0, 0) = v;
      return m;
    }));
  return StrictlyLocalOperatorSpec(1, k0, std::move(mats));
}

// Operator with matrix coefficients built entrywise from scalar sequences:
// entries[k + k0][i][j] is the (i, j) scalar sequence of A_k.
inline StrictlyLocalOperatorSpec operator_from_entries(
    int n, const std::vector<std::vector<std::vector<ComplexSequence>>>& entries) {
  const int k0 = (static_cast<int>(entries.size()) - 1) / 2;
  std::vector<MatrixSequence> coeffs;
  for (const auto& block : entries) {
    std::vector<ComplexSequence> flat;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) flat.push_back(block[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    coeffs.push_back(zip_sequences<ComplexMatrix>(
        flat, [n](const std::vector<Complex>& vs) -> ComplexMatrix {
          ComplexMatrix m(n, n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = vs[static_cast<size_t>(i * n + j)];
          return m;
        }));
  }
  return StrictlyLocalOperatorSpec(n, k0, std::move(coeffs));
}

inline ComplexSequence to_complex(const ScalarSequence& s) {
  return s.map([](double v) -> Complex { return Complex(v, 0.0); });
}

inline ComplexSequence complex_constant(Complex v) {
  return ComplexSequence::constant(v);
}

// The bilateral left shift L^power as a 1-dimensional spec.
inline StrictlyLocalOperatorSpec shift_operator(int power) {
  const int k0 = std::abs(power);
  std::vector<ComplexSequence> coeffs;
  for (int k = -k0; k <= k0; ++k)
    coeffs.push_back(complex_constant(k == power ? 1.0 : 0.0));
  return scalar_operator(std::move(coeffs));
}

inline StrictlyLocalOperatorSpec identity_operator(int n) {
  ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return StrictlyLocalOperatorSpec(n, 0, {MatrixSequence::constant(id)});
}

}  // namespace chiralwalk
