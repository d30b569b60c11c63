#pragma once

// Brute-force cross-checks, independent of the symbol pipeline:
//  - circulant realization of a periodic operator on a finite ring, whose
//    spectrum must reproduce the symbol union over roots of unity,
//  - direct application of a strictly local operator to a windowed vector,
//  - partial geometric means of positive sequences with periodic tails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "chiralwalk/lattice.hpp"
#include "chiralwalk/numkernel.hpp"

namespace chiralwalk::oracle {

inline constexpr int kCirculantMaxDim = 2048;
inline constexpr int kDefaultCells = 64;

// Dense realization of the purely periodic operator obtained by extending
// one side's tails over the whole lattice, placed on the ring Z/(n_s M).
struct CirculantRealization {
  int cells = 0;        // M
  int sites = 0;        // n_s M
  ComplexMatrix matrix; // dimension n * sites
};

inline CirculantRealization circulant_realization(
    const StrictlyLocalOperatorSpec& op, Side side, int cells) {
  if (cells < 1)
    throw Error(ErrorCode::SchemaError, "need at least one ring cell");
  const int n = op.internal_dim();
  const int k0 = op.bandwidth();
  const int ns = op.period(side);
  const int sites = ns * cells;
  const int dim = n * sites;
  if (dim > kCirculantMaxDim)
    throw Error(ErrorCode::TooLarge,
                "ring realization dimension exceeds 2048");
  // The ring stands in for a purely periodic operator; reject inputs whose
  // core disagrees with the tail extension on the chosen side.
  for (int k = -k0; k <= k0; ++k) {
    const auto& s = op.coeff(k);
    for (std::int64_t x = s.core_start(); x < s.core_end(); ++x) {
      const ComplexMatrix tail_ext = s.limit(side == Side::Right, x);
      if (detail::matrix_distance(s.value_at(x), tail_ext) != 0.0)
        throw Error(ErrorCode::NotPeriodic,
                    "operator core deviates from the periodic tail");
    }
  }

  CirculantRealization out;
  out.cells = cells;
  out.sites = sites;
  out.matrix = ComplexMatrix::Zero(dim, dim);
  for (int x = 0; x < sites; ++x) {
    for (int k = -k0; k <= k0; ++k) {
      const int y = phase_mod(x + k, sites);
      const ComplexMatrix a = op.tail_value(k, side, x);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out.matrix(i * sites + x, j * sites + y) += a(i, j);
    }
  }
  return out;
}

inline std::vector<Complex> circulant_spectrum(
    const StrictlyLocalOperatorSpec& op, Side side, int cells) {
  const CirculantRealization ring = circulant_realization(op, side, cells);
  if (hermitian_defect(ring.matrix) <= kHermitianTol) {
    std::vector<Complex> out;
    for (double v : hermitian_eigenvalues(ring.matrix)) out.emplace_back(v, 0.0);
    return out;
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(ring.matrix, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "ring eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

// Greedy matching distance between two eigenvalue multisets: max over
// matched pairs of |a - b|, infinity-like large value on size mismatch.
inline double multiset_distance(std::vector<Complex> a,
                                std::vector<Complex> b) {
  if (a.size() != b.size()) return 1e300;
  auto lex = [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  double index_matched = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    index_matched = std::max(index_matched, std::abs(a[i] - b[i]));
  if (index_matched < 1e-9) return index_matched;
  // Fall back to nearest-neighbour matching when lexicographic sorting
  // shuffles nearly-degenerate values differently in the two lists.
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    double best = 1e300;
    size_t best_j = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

// Symbol union over the M-th roots of unity; the ring spectrum must equal
// this multiset.
inline std::vector<Complex> symbol_union_spectrum(
    const StrictlyLocalOperatorSpec& op, Side side, int cells) {
  std::vector<Complex> out;
  for (int t = 0; t < cells; ++t) {
    const Complex z = std::polar(1.0, 2.0 * M_PI * t / cells);
    const ComplexMatrix sym = symbol_at(op, side, z);
    if (hermitian_defect(sym) <= kHermitianTol) {
      for (double v : hermitian_eigenvalues(sym)) out.emplace_back(v, 0.0);
    } else {
      for (const Complex& v : general_eigenvalues(sym)) out.push_back(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct application

// Finitely supported vector on the lattice: values[x - start] in C^n.
struct SiteVector {
  std::int64_t start = 0;
  std::vector<ComplexVector> values;

  std::int64_t end() const {
    return start + static_cast<std::int64_t>(values.size());
  }
  ComplexVector at(std::int64_t x, int n) const {
    if (x < start || x >= end()) return ComplexVector::Zero(n);
    return values[static_cast<size_t>(x - start)];
  }
  double squared_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += v.squaredNorm();
    return s;
  }
};

// (A v)(x) = sum_k A_k(x) v(x + k); support grows by at most k0 per side.
inline SiteVector apply(const StrictlyLocalOperatorSpec& op,
                        const SiteVector& v) {
  const int n = op.internal_dim();
  const int k0 = op.bandwidth();
  SiteVector out;
  out.start = v.start - k0;
  const std::int64_t out_end = v.end() + k0;
  out.values.assign(static_cast<size_t>(out_end - out.start),
                    ComplexVector::Zero(n));
  for (std::int64_t x = out.start; x < out_end; ++x) {
    ComplexVector acc = ComplexVector::Zero(n);
    for (int k = -k0; k <= k0; ++k) {
      const std::int64_t y = x + k;
      if (y < v.start || y >= v.end()) continue;
      acc += op.coeff_at(k, x) * v.values[static_cast<size_t>(y - v.start)];
    }
    out.values[static_cast<size_t>(x - out.start)] = acc;
  }
  return out;
}

inline SiteVector subtract(const SiteVector& a, const SiteVector& b, int n) {
  SiteVector out;
  out.start = std::min(a.start, b.start);
  const std::int64_t e = std::max(a.end(), b.end());
  out.values.assign(static_cast<size_t>(e - out.start), ComplexVector::Zero(n));
  for (std::int64_t x = out.start; x < e; ++x)
    out.values[static_cast<size_t>(x - out.start)] = a.at(x, n) - b.at(x, n);
  return out;
}

inline double max_site_norm(const SiteVector& v) {
  double worst = 0.0;
  for (const auto& val : v.values) worst = std::max(worst, val.norm());
  return worst;
}

// ---------------------------------------------------------------------------
// Geometric means

// Partial geometric mean (prod_{m < horizon} seq(m))^(1/horizon), computed
// in the log domain. For positive sequences with a periodic right tail this
// converges to the tail's geometric mean.
inline double geometric_mean_limit(const ScalarSequence& seq,
                                   std::int64_t horizon) {
  if (horizon < 1)
    throw Error(ErrorCode::SchemaError, "horizon must be positive");
  double log_sum = 0.0;
  for (std::int64_t x = 0; x < horizon; ++x) {
    const double v = seq.value_at(x);
    if (!(v > 0.0))
      throw Error(ErrorCode::NonPositive,
                  "geometric mean requires positive values");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(horizon));
}

}  // namespace chiralwalk::oracle
