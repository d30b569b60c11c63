#pragma once

// The split-step quantum walk on l^2(Z, C^2): a chiral pair (Gamma, U) built
// from two coin sequences p, a in [-1, 1]. Gamma is the half-shift
// conjugated p-coin, U = Gamma Gamma' with Gamma' the a-coin, and
// U^* = Gamma U Gamma. This header covers the model, the Lambda-calculus on
// [-1, 1], the operator constructions, the half-step blocks and their
// closed-form determinants, the chiral-basis blocks of Re U / Im U, the
// signed index formulas with their winding cross-check, and the band
// structure of the essential spectrum including the period-1/period-2
// closed forms.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "chiralwalk/fredholm.hpp"
#include "chiralwalk/lattice.hpp"
#include "chiralwalk/spectra.hpp"

namespace chiralwalk {

enum class ChiralSign { Plus, Minus };

inline const char* sign_name(ChiralSign s) {
  return s == ChiralSign::Plus ? "plus" : "minus";
}

// Upper/lower sign in the formulas: "∓" reads -1 for Plus, +1 for Minus.
inline double lower_sign(ChiralSign s) {
  return s == ChiralSign::Plus ? -1.0 : 1.0;
}

// ---------------------------------------------------------------------------
// Model

struct SplitStepModel {
  ScalarSequence p;
  ScalarSequence a;

  SplitStepModel(ScalarSequence p_seq, ScalarSequence a_seq)
      : p(std::move(p_seq)), a(std::move(a_seq)) {
    auto check = [](const ScalarSequence& s, const char* name) {
      auto in_range = [](double v) { return std::isfinite(v) && std::abs(v) <= 1.0; };
      for (double v : s.left_tail())
        if (!in_range(v))
          throw Error(ErrorCode::RangeError,
                      std::string(name) + " left tail value out of [-1, 1]");
      for (double v : s.right_tail())
        if (!in_range(v))
          throw Error(ErrorCode::RangeError,
                      std::string(name) + " right tail value out of [-1, 1]");
      for (double v : s.core_values())
        if (!in_range(v))
          throw Error(ErrorCode::RangeError,
                      std::string(name) + " core value out of [-1, 1]");
    };
    check(p, "p");
    check(a, "a");
  }

  int period(Side side) const {
    const int np = side == Side::Left ? p.left_period() : p.right_period();
    const int na = side == Side::Left ? a.left_period() : a.right_period();
    return static_cast<int>(std::lcm(np, na));
  }

  double tail(const ScalarSequence& s, Side side, std::int64_t m) const {
    return s.limit(side == Side::Right, m);
  }

  // sup_x |p(x)|, sup_x |a(x)| over core and both tails.
  double sup_abs_p() const { return sup_abs(p); }
  double sup_abs_a() const { return sup_abs(a); }

 private:
  static double sup_abs(const ScalarSequence& s) {
    double worst = 0.0;
    for (double v : s.left_tail()) worst = std::max(worst, std::abs(v));
    for (double v : s.right_tail()) worst = std::max(worst, std::abs(v));
    for (double v : s.core_values()) worst = std::max(worst, std::abs(v));
    return worst;
  }
};

// ---------------------------------------------------------------------------
// Lambda calculus on [-1, 1] <-> [0, inf]

// Lambda(s) = (1 + s)/(1 - s), kept in the log domain: log Lambda(s) =
// 2 artanh(s), so products become sums and the inverse is tanh(log/2).
// 0 * inf (log: -inf + inf) has no consistent value and is rejected.
class ExtendedHalfLine {
 public:
  static ExtendedHalfLine from_log(double l) { return ExtendedHalfLine(l); }
  static ExtendedHalfLine from_value(double v) {
    if (!(v >= 0.0))
      throw Error(ErrorCode::OutOfDomain, "half-line values are >= 0");
    return ExtendedHalfLine(std::log(v));
  }

  double log() const { return log_; }
  double value() const { return std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0; }
  bool is_infinite() const { return std::isinf(log_) && log_ > 0; }

  ExtendedHalfLine times(const ExtendedHalfLine& o) const {
    if ((is_zero() && o.is_infinite()) || (is_infinite() && o.is_zero()))
      throw Error(ErrorCode::UndefinedQuotient, "0 * inf is undefined");
    return from_log(log_ + o.log_);
  }

  ExtendedHalfLine pow(double e) const { return from_log(log_ * e); }

 private:
  explicit ExtendedHalfLine(double l) : log_(l) {}
  double log_;
};

inline ExtendedHalfLine lambda_map(double s) {
  if (!(std::abs(s) <= 1.0))
    throw Error(ErrorCode::OutOfDomain, "lambda_map needs s in [-1, 1]");
  return ExtendedHalfLine::from_log(2.0 * std::atanh(s));
}

inline double lambda_inverse(const ExtendedHalfLine& t) {
  return std::tanh(t.log() / 2.0);
}

// Per-side effective two-phase parameters: the tail tables averaged through
// Lambda, (prod_m Lambda(zeta(side, m)))^(1/n) pulled back to [-1, 1].
struct TailAverages {
  double p_avg = 0.0;
  double a_avg = 0.0;
};

inline TailAverages tail_average(const SplitStepModel& model, Side side) {
  const int n = model.period(side);
  TailAverages out;
  auto average = [&](const ScalarSequence& seq, const char* name) {
    double log_sum = 0.0;
    for (int m = 0; m < n; ++m)
      log_sum += 2.0 * std::atanh(model.tail(seq, side, m));
    if (std::isnan(log_sum))
      throw Error(ErrorCode::UndefinedQuotient,
                  std::string(name) + " tail mixes +1 and -1 (0/0 average)");
    return std::tanh(log_sum / (2.0 * n));
  };
  out.p_avg = average(model.p, "p");
  out.a_avg = average(model.a, "a");
  return out;
}

// ---------------------------------------------------------------------------
// Operator constructions

namespace detail {

inline ComplexSequence seq_sqrt1p(const ScalarSequence& s, double sign) {
  return to_complex(
      s.map([sign](double v) { return std::sqrt(1.0 + sign * v); }));
}

inline ComplexSequence seq_b(const ScalarSequence& s) {
  return to_complex(s.map([](double v) { return std::sqrt(1.0 - v * v); }));
}

// 2x2 coin [[z, sqrt(1-z^2)], [sqrt(1-z^2), -z]] as a multiplication operator.
inline StrictlyLocalOperatorSpec coin_operator(const ScalarSequence& zeta) {
  ComplexSequence z = to_complex(zeta);
  ComplexSequence w = seq_b(zeta);
  ComplexSequence mz = to_complex(zeta.map([](double v) { return -v; }));
  return operator_from_entries(2, {{{z, w}, {w, mz}}});
}

// diag(1, L^direction) with direction +-1, as a bandwidth-1 spec.
inline StrictlyLocalOperatorSpec half_shift(int direction) {
  if (direction != 1 && direction != -1)
    throw Error(ErrorCode::InternalError, "half shift direction must be +-1");
  ComplexSequence one = complex_constant(1.0);
  ComplexSequence zero = complex_constant(0.0);
  std::vector<std::vector<std::vector<ComplexSequence>>> entries(
      3, {{zero, zero}, {zero, zero}});
  entries[1][0][0] = one;                              // k = 0: diag(1, 0)
  entries[static_cast<size_t>(1 + direction)][1][1] = one;  // k = direction
  return operator_from_entries(2, entries);
}

// Drop outermost coefficient pairs that vanish identically.
inline StrictlyLocalOperatorSpec trimmed(const StrictlyLocalOperatorSpec& op) {
  const int n = op.internal_dim();
  const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
  const MatrixSequence zseq = MatrixSequence::constant(zero);
  int k0 = op.bandwidth();
  auto is_zero = [&](int k) {
    return sequence_distance(op.coeff(k), zseq, detail::matrix_distance) == 0.0;
  };
  while (k0 > 0 && is_zero(k0) && is_zero(-k0)) --k0;
  std::vector<MatrixSequence> coeffs;
  for (int k = -k0; k <= k0; ++k) coeffs.push_back(op.coeff(k));
  return StrictlyLocalOperatorSpec(n, k0, std::move(coeffs));
}

}  // namespace detail

// Gamma: half-shift conjugated p-coin; unitary, self-adjoint, bandwidth 1.
inline StrictlyLocalOperatorSpec gamma_operator(const SplitStepModel& model) {
  auto g = compose(compose(detail::half_shift(-1),
                           detail::coin_operator(model.p)),
                   detail::half_shift(+1));
  return detail::trimmed(g);
}

// U = Gamma * (a-coin). The product collapses to band 1; the spec is padded
// to bandwidth 2, the walk's nominal locality radius.
inline StrictlyLocalOperatorSpec evolution_operator(
    const SplitStepModel& model) {
  auto u = compose(gamma_operator(model), detail::coin_operator(model.a));
  return with_bandwidth(detail::trimmed(u), 2);
}

// ---------------------------------------------------------------------------
// Half-step blocks

// F = eta^* epsilon mixes the two coin bases; its blocks are the
// one-dimensional operators 2 F_{1,+-} = -+ p_+ a_-+ + a_+- L^* p_- and
// 2 F_{2,+-} = -+ p_- a_+- + a_-+ L^* p_+. Their per-side symbol
// determinants obey
//   det(2 Fhat_{1,+-}(side, z))
//     = prod_m f_{0,+-}(side, m)
//     + (-1)^(n+1) (prod_m f_{-1,+-}(side, m)) z^*.
struct HalfStepBlocks {
  // index 0: sign +, index 1: sign -
  std::array<StrictlyLocalOperatorSpec, 2> two_f1;
  std::array<StrictlyLocalOperatorSpec, 2> two_f2;
  std::array<ComplexSequence, 2> f0;   // order-0 coefficient of 2 F_{1,s}
  std::array<ComplexSequence, 2> fm1;  // order -1 coefficient of 2 F_{1,s}

  static int index(ChiralSign s) { return s == ChiralSign::Plus ? 0 : 1; }

  const StrictlyLocalOperatorSpec& first_block(ChiralSign s) const {
    return two_f1[static_cast<size_t>(index(s))];
  }
  const StrictlyLocalOperatorSpec& second_block(ChiralSign s) const {
    return two_f2[static_cast<size_t>(index(s))];
  }

  Complex closed_determinant(Side side, ChiralSign s, Complex z) const {
    const size_t i = static_cast<size_t>(index(s));
    const int n = static_cast<int>(std::lcm(
        side == Side::Left ? f0[i].left_period() : f0[i].right_period(),
        side == Side::Left ? fm1[i].left_period() : fm1[i].right_period()));
    Complex prod0 = 1.0, prodm1 = 1.0;
    for (int m = 0; m < n; ++m) {
      prod0 *= f0[i].limit(side == Side::Right, m);
      prodm1 *= fm1[i].limit(side == Side::Right, m);
    }
    const double parity = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)
    return prod0 + parity * prodm1 * std::conj(z);
  }
};

inline HalfStepBlocks half_step_blocks(const SplitStepModel& model) {
  ComplexSequence p_plus = detail::seq_sqrt1p(model.p, +1.0);
  ComplexSequence p_minus = detail::seq_sqrt1p(model.p, -1.0);
  ComplexSequence a_plus = detail::seq_sqrt1p(model.a, +1.0);
  ComplexSequence a_minus = detail::seq_sqrt1p(model.a, -1.0);
  auto prod = [](const ComplexSequence& x, const ComplexSequence& y) {
    return combine<Complex>(x, y, [](Complex u, Complex v) { return u * v; });
  };
  auto neg = [](const ComplexSequence& x) {
    return x.map([](Complex v) { return -v; });
  };
  ComplexSequence zero = complex_constant(0.0);

  // sign +: f0 = -p_+ a_-, f-1(x) = p_-(x-1) a_+(x)
  ComplexSequence f0_plus = neg(prod(p_plus, a_minus));
  ComplexSequence fm1_plus = prod(p_minus.shifted(-1), a_plus);
  // sign -: f0 = +p_+ a_+, f-1(x) = p_-(x-1) a_-(x)
  ComplexSequence f0_minus = prod(p_plus, a_plus);
  ComplexSequence fm1_minus = prod(p_minus.shifted(-1), a_minus);

  // 2 F_{2,+-} = -+ p_- a_+- + a_-+ L^* p_+
  ComplexSequence g0_plus = neg(prod(p_minus, a_plus));
  ComplexSequence gm1_plus = prod(p_plus.shifted(-1), a_minus);
  ComplexSequence g0_minus = prod(p_minus, a_minus);
  ComplexSequence gm1_minus = prod(p_plus.shifted(-1), a_plus);

  HalfStepBlocks blocks{
      {scalar_operator({fm1_plus, f0_plus, zero}),
       scalar_operator({fm1_minus, f0_minus, zero})},
      {scalar_operator({gm1_plus, g0_plus, zero}),
       scalar_operator({gm1_minus, g0_minus, zero})},
      {f0_plus, f0_minus},
      {fm1_plus, fm1_minus}};
  return blocks;
}

// ---------------------------------------------------------------------------
// Chiral-basis blocks of U

// In the basis that diagonalizes Gamma, Re U is block diagonal with the two
// formally self-adjoint banded operators below, and Im U is off-diagonal
// with a single corner block:
//   2 R_1 = p_- L p_+ b + p_+ b L^* p_- + (1 + p) a - (1 - p) a(.+1)
//   2 R_2 = p_+ L p_- b + p_- b L^* p_+ - (1 - p) a + (1 + p) a(.+1)
//  -2i Q_0 = p_+ L p_+ b - p_- b L^* p_- - q (a + a(.+1))
struct ChiralBlocks {
  StrictlyLocalOperatorSpec r1;
  StrictlyLocalOperatorSpec r2;
  StrictlyLocalOperatorSpec q0;

  const StrictlyLocalOperatorSpec& real_block(ChiralSign s) const {
    return s == ChiralSign::Plus ? r1 : r2;
  }
};

inline ChiralBlocks chiral_blocks(const SplitStepModel& model) {
  ComplexSequence p_plus = detail::seq_sqrt1p(model.p, +1.0);
  ComplexSequence p_minus = detail::seq_sqrt1p(model.p, -1.0);
  ComplexSequence b = detail::seq_b(model.a);
  ComplexSequence q = detail::seq_b(model.p);
  ComplexSequence a = to_complex(model.a);
  ComplexSequence a_next = a.shifted(1);
  ComplexSequence p = to_complex(model.p);

  auto mul3 = [](const ComplexSequence& x, const ComplexSequence& y,
                 const ComplexSequence& z) {
    std::vector<ComplexSequence> ss{x, y, z};
    return zip_sequences<Complex>(ss, [](const std::vector<Complex>& v) {
      return v[0] * v[1] * v[2];
    });
  };
  auto lin = [](Complex ca, const ComplexSequence& x, Complex cb,
                const ComplexSequence& y) {
    return combine<Complex>(
        x, y, [ca, cb](Complex u, Complex v) { return ca * u + cb * v; });
  };
  auto onep = [&](double sign) {  // (1 + sign p)
    return p.map([sign](Complex v) { return 1.0 + sign * v; });
  };
  auto halve = [](const ComplexSequence& s) {
    return s.map([](Complex v) { return v / 2.0; });
  };

  // k = +1 coefficients alpha_1(x); k = -1 follows by self-adjointness as
  // alpha_1(x-1), and for Q_0 by anti-self-adjointness.
  ComplexSequence r1_up = mul3(p_minus, p_plus.shifted(1), b.shifted(1));
  ComplexSequence r1_d =
      combine<Complex>(combine<Complex>(onep(+1.0), a,
                                        [](Complex u, Complex v) { return u * v; }),
                       combine<Complex>(onep(-1.0), a_next,
                                        [](Complex u, Complex v) { return u * v; }),
                       [](Complex u, Complex v) { return u - v; });
  ComplexSequence r2_up = mul3(p_plus, p_minus.shifted(1), b.shifted(1));
  ComplexSequence r2_d =
      combine<Complex>(combine<Complex>(onep(-1.0), a,
                                        [](Complex u, Complex v) { return u * v; }),
                       combine<Complex>(onep(+1.0), a_next,
                                        [](Complex u, Complex v) { return u * v; }),
                       [](Complex u, Complex v) { return v - u; });

  auto r_spec = [&](const ComplexSequence& up, const ComplexSequence& diag) {
    return scalar_operator({halve(up.shifted(-1)), halve(diag), halve(up)});
  };

  // -2i Q_0 parts: up = p_+(x) p_+(x+1) b(x+1), down(x) = -p_-(x-1) p_-(x) b(x),
  // diag = -q (a + a(.+1)); multiply by i/2 for Q_0 itself.
  ComplexSequence q_up = mul3(p_plus, p_plus.shifted(1), b.shifted(1));
  ComplexSequence q_down = mul3(p_minus.shifted(-1), p_minus, b);
  ComplexSequence q_diag = combine<Complex>(
      q, lin(1.0, a, 1.0, a_next),
      [](Complex u, Complex v) { return -u * v; });
  const Complex ihalf(0.0, 0.5);
  auto scale_seq = [ihalf](const ComplexSequence& s, double sgn) {
    return s.map([ihalf, sgn](Complex v) { return sgn * ihalf * v; });
  };

  return ChiralBlocks{
      r_spec(r1_up, r1_d), r_spec(r2_up, r2_d),
      scalar_operator({scale_seq(q_down, -1.0), scale_seq(q_diag, 1.0),
                       scale_seq(q_up, 1.0)})};
}

// Corner-tridiagonal symbol of the real-part block for one side and sign:
//   diag[m] = ((p_m +- 1) a_m + (p_m -+ 1) a_{m+1}) / 2
//   off[m]  = sqrt((1 -+ p_m)(1 +- p_{m+1})(1 - a_{m+1}^2)) / 2
// with indices cyclic mod the side period.
inline CornerTridiagonal real_block_corner(const SplitStepModel& model,
                                           Side side, ChiralSign sign,
                                           Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw Error(ErrorCode::NonUnitPhase, "corner phase must be unimodular");
  const int n = model.period(side);
  const double upper = -lower_sign(sign);  // "+-": +1 for Plus
  CornerTridiagonal t;
  t.corner_phase = z;
  for (int m = 0; m < n; ++m) {
    const double pm = model.tail(model.p, side, m);
    const double pm1 = model.tail(model.p, side, m + 1);
    const double am = model.tail(model.a, side, m);
    const double am1 = model.tail(model.a, side, m + 1);
    t.diag.push_back(((pm + upper) * am + (pm - upper) * am1) / 2.0);
    t.off.push_back(std::sqrt((1.0 - upper * pm) * (1.0 + upper * pm1) *
                              (1.0 - am1 * am1)) /
                    2.0);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Signed indices (closed form + winding cross-check)

struct SignSideData {
  bool fredholm = false;
  double log_lhs = 0.0;  // log prod (1 + p)(1 -+ a)
  double log_rhs = 0.0;  // log prod (1 - p)(1 +- a)
  std::optional<int> winding;
};

struct SignedIndexData {
  SignSideData left;
  SignSideData right;
  bool fredholm = false;
  std::optional<int> index;          // closed-form sign formula
  std::optional<int> winding_index;  // wn(right) - wn(left)
  bool routes_agree = true;
};

struct SignedIndexReport {
  SignedIndexData plus;
  SignedIndexData minus;
  std::optional<double> p_left, a_left, p_right, a_right;
  std::vector<std::string> warnings;

  const SignedIndexData& data(ChiralSign s) const {
    return s == ChiralSign::Plus ? plus : minus;
  }
  bool fredholm_all() const { return plus.fredholm && minus.fredholm; }
};

inline constexpr double kLogProductTol = 1e-9;

namespace detail {

inline SignSideData sign_side_products(const SplitStepModel& model, Side side,
                                       ChiralSign sign,
                                       std::vector<std::string>& warnings) {
  const int n = model.period(side);
  const double lower = lower_sign(sign);
  SignSideData out;
  out.log_lhs = 0.0;
  out.log_rhs = 0.0;
  for (int m = 0; m < n; ++m) {
    const double pm = model.tail(model.p, side, m);
    const double am = model.tail(model.a, side, m);
    out.log_lhs += std::log1p(pm) + std::log1p(lower * am);
    out.log_rhs += std::log1p(-pm) + std::log1p(-lower * am);
  }
  const double diff = out.log_lhs - out.log_rhs;
  if (std::isnan(diff) || (std::isinf(out.log_lhs) && std::isinf(out.log_rhs) &&
                           out.log_lhs < 0 && out.log_rhs < 0)) {
    // Both products vanish: +-1 sits in the essential spectrum.
    out.fredholm = false;
    warnings.push_back(std::string("DegenerateProducts:") + side_name(side) +
                       ":" + sign_name(sign));
  } else if (std::abs(diff) <= kLogProductTol) {
    out.fredholm = false;
    warnings.push_back(std::string("NearDegenerate:") + side_name(side) + ":" +
                       sign_name(sign));
  } else {
    out.fredholm = true;
  }
  return out;
}

inline int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace detail

inline SignedIndexReport index_pm(const SplitStepModel& model,
                                  const FredholmOptions& opt = {}) {
  SignedIndexReport report;
  const HalfStepBlocks blocks = half_step_blocks(model);

  // Lambda-averaged tail parameters (absent when a tail mixes +1 and -1).
  std::optional<TailAverages> avg_left, avg_right;
  try {
    avg_left = tail_average(model, Side::Left);
    avg_right = tail_average(model, Side::Right);
    report.p_left = avg_left->p_avg;
    report.a_left = avg_left->a_avg;
    report.p_right = avg_right->p_avg;
    report.a_right = avg_right->a_avg;
  } catch (const Error& e) {
    report.warnings.push_back(e.what());
  }

  for (ChiralSign sign : {ChiralSign::Plus, ChiralSign::Minus}) {
    SignedIndexData data;
    data.left =
        detail::sign_side_products(model, Side::Left, sign, report.warnings);
    data.right =
        detail::sign_side_products(model, Side::Right, sign, report.warnings);
    data.fredholm = data.left.fredholm && data.right.fredholm;

    if (data.fredholm) {
      // Closed form: ind = (sgn(p(+inf) -+ a(+inf)) - sgn(p(-inf) -+ a(-inf)))/2.
      // The sign of p(side) -+ a(side) equals the sign of log lhs - log rhs.
      const double lower = lower_sign(sign);
      int sgn_right, sgn_left;
      if (avg_left && avg_right) {
        sgn_right = detail::sign_of(avg_right->p_avg + lower * avg_right->a_avg);
        sgn_left = detail::sign_of(avg_left->p_avg + lower * avg_left->a_avg);
      } else {
        sgn_right = detail::sign_of(data.right.log_lhs - data.right.log_rhs);
        sgn_left = detail::sign_of(data.left.log_lhs - data.left.log_rhs);
      }
      if (sgn_right == 0 || sgn_left == 0)
        throw Error(ErrorCode::InternalError,
                    "sign formula reached sgn(0) past the Fredholm gate");
      data.index = (sgn_right - sgn_left) / 2;
    }

    // Winding route on the half-step determinant curve.
    IndexReport winding = fredholm_index(blocks.first_block(sign), opt);
    if (winding.fredholm) {
      data.left.winding = winding.wn_left;
      data.right.winding = winding.wn_right;
      data.winding_index = winding.index;
    }
    for (const auto& w : winding.warnings) report.warnings.push_back(w);

    data.routes_agree = (data.fredholm == winding.fredholm);
    if (data.fredholm && winding.fredholm)
      data.routes_agree = (*data.index == *data.winding_index);
    if (!data.routes_agree)
      report.warnings.push_back(std::string("RouteMismatch:") +
                                sign_name(sign));

    (sign == ChiralSign::Plus ? report.plus : report.minus) = data;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Essential spectrum of U

// Per-side band set E(side) = union over the circle of the spectra of both
// corner-tridiagonal families. The essential spectrum of U is the
// conjugation-symmetric arc set { e^{i theta} : cos theta in E }.
inline SpectralBands real_block_band_set(const SplitStepModel& model,
                                         Side side, ChiralSign sign,
                                         int samples = kDefaultBandSamples) {
  std::vector<HermitianFamily> fams{[&model, side, sign](Complex z) {
    return realize(real_block_corner(model, side, sign, z));
  }};
  const auto sweep = detail::sweep_families(fams, samples);
  SpectralBands bands;
  bands.intervals = sweep.intervals;
  bands.resolution = sweep.resolution;
  bands.arcs = arcs_from_intervals(bands.intervals);
  return bands;
}

struct EssentialSpectrumU {
  SpectralBands combined;       // E(-inf) u E(+inf) with arcs
  SpectralBands left, right;    // per-side band sets (both signs united)
};

inline EssentialSpectrumU essential_spectrum_U(
    const SplitStepModel& model, int samples = kDefaultBandSamples) {
  EssentialSpectrumU out;
  std::vector<Interval> all;
  double resolution = kResolutionFloor;
  for (Side side : {Side::Left, Side::Right}) {
    std::vector<HermitianFamily> fams;
    for (ChiralSign sign : {ChiralSign::Plus, ChiralSign::Minus})
      fams.push_back([&model, side, sign](Complex z) {
        return realize(real_block_corner(model, side, sign, z));
      });
    const auto sweep = detail::sweep_families(fams, samples);
    SpectralBands bands;
    bands.intervals = sweep.intervals;
    bands.resolution = sweep.resolution;
    bands.arcs = arcs_from_intervals(bands.intervals);
    (side == Side::Left ? out.left : out.right) = bands;
    for (const auto& iv : sweep.intervals) all.push_back(iv);
    resolution = std::max(resolution, sweep.resolution);
  }
  out.combined.intervals = merge_intervals(std::move(all));
  out.combined.resolution = resolution;
  out.combined.arcs = arcs_from_intervals(out.combined.intervals);
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form bands for side periods 1 and 2

// Period 1: I = p a + [-q b, q b]. Period 2:
//   I_j = d + (-1)^j [sqrt(d^2 + d_1), sqrt(d^2 + d_2)],
//   d = (p_0 + p_1)(a_0 + a_1)/4,
//   d_j = (2 - (1 + p_0 p_1)(1 + a_0 a_1) + (-1)^j q_0 q_1 b_0 b_1)/2.
// The two intervals are singletons exactly when some parameter is +-1, and
// their union is connected exactly when the 2x2 family parameters coincide.
inline SpectralBands closed_bands(const SplitStepModel& model, Side side) {
  const int n = model.period(side);
  SpectralBands bands;
  bands.resolution = 0.0;
  if (n == 1) {
    const double p0 = model.tail(model.p, side, 0);
    const double a0 = model.tail(model.a, side, 0);
    const double qb = std::sqrt((1.0 - p0 * p0) * (1.0 - a0 * a0));
    bands.intervals = {{p0 * a0 - qb, p0 * a0 + qb}};
    bands.singleton = (qb == 0.0);
    bands.connected = true;
  } else if (n == 2) {
    const double p0 = model.tail(model.p, side, 0);
    const double p1 = model.tail(model.p, side, 1);
    const double a0 = model.tail(model.a, side, 0);
    const double a1 = model.tail(model.a, side, 1);
    const double d = (p0 + p1) * (a0 + a1) / 4.0;
    const double qqbb = std::sqrt((1.0 - p0 * p0) * (1.0 - p1 * p1) *
                                  (1.0 - a0 * a0) * (1.0 - a1 * a1));
    const double base = 2.0 - (1.0 + p0 * p1) * (1.0 + a0 * a1);
    auto radicand = [&](int j) {
      const double dj = (base + (j == 1 ? -1.0 : 1.0) * qqbb) / 2.0;
      const double r = d * d + dj;
      if (r < -1e-12)
        throw Error(ErrorCode::InternalError,
                    "negative radicand in the period-2 band formula");
      return std::max(r, 0.0);
    };
    const double r1 = std::sqrt(radicand(1));
    const double r2 = std::sqrt(radicand(2));
    bands.intervals =
        merge_intervals({{d - r2, d - r1}, {d + r1, d + r2}}, kMergeTol);
    bands.singleton = (qqbb == 0.0);
    bands.connected = (r1 <= kMergeTol);
  } else {
    throw Error(ErrorCode::UnsupportedPeriod,
                "closed-form bands exist for side periods 1 and 2 only");
  }
  bands.arcs = arcs_from_intervals(bands.intervals);
  return bands;
}

}  // namespace chiralwalk
