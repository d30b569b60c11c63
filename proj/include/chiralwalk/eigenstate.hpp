#pragma once

// Symmetry-protected eigenstates of the split-step walk at +-1. When the
// signed index is nonzero, the eigenspace is spanned by a first-order
// recursion: psi(x+1) = s * delta_{j,s}(x) psi(x) with s = +1 for the
// +1-eigenstate and s = -1 for the -1-eigenstate, where
//   delta_{j,s}(x) = sqrt(Lambda((-1)^j p(x)) Lambda(-+ (-1)^j a(x))),
// and -+ (-1)^j is also the sign carried by the first spinor component. The branch j is picked
// by a root test on the averaged tail parameters, and the resulting state
// decays exponentially with certified constants.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "chiralwalk/oracle.hpp"
#include "chiralwalk/splitstep.hpp"

namespace chiralwalk {

// delta_{j,s}(x), kept in the log domain for window-scale products.
struct DeltaProfile {
  int branch = 0;  // j in {1, 2}
  ChiralSign sign = ChiralSign::Plus;
  ScalarSequence log_delta;

  double log_at(std::int64_t x) const { return log_delta.value_at(x); }
  double at(std::int64_t x) const { return std::exp(log_at(x)); }
};

inline DeltaProfile delta_profile(const SplitStepModel& model, int branch,
                                  ChiralSign sign) {
  if (branch != 1 && branch != 2)
    throw Error(ErrorCode::InternalError, "branch must be 1 or 2");
  if (model.sup_abs_p() >= 1.0 || model.sup_abs_a() >= 1.0)
    throw Error(ErrorCode::SupremumViolated,
                "delta profile needs sup |p| < 1 and sup |a| < 1");
  const double sp = (branch == 1) ? -1.0 : 1.0;           // (-1)^j
  const double sa = lower_sign(sign) * sp;                // -+ (-1)^j
  std::vector<ScalarSequence> seqs{model.p, model.a};
  DeltaProfile out{branch, sign,
                   zip_sequences<double>(
                       seqs, [sp, sa](const std::vector<double>& v) {
                         return std::atanh(sp * v[0]) + std::atanh(sa * v[1]);
                       })};
  return out;
}

// Root-test branch selection: the series for branch j sums iff
// (-1)^j (p(+inf) -+ a(+inf)) < 0 < (-1)^j (p(-inf) -+ a(-inf)).
// Returns the convergent branch, or nothing when the index vanishes.
inline std::optional<int> series_branch(const SplitStepModel& model,
                                        ChiralSign sign) {
  const TailAverages left = tail_average(model, Side::Left);
  const TailAverages right = tail_average(model, Side::Right);
  const double lower = lower_sign(sign);
  const double gap_left = left.p_avg + lower * left.a_avg;
  const double gap_right = right.p_avg + lower * right.a_avg;
  if (gap_left == 0.0 || gap_right == 0.0)
    throw Error(ErrorCode::FredholmViolated,
                "averaged tails sit at p = -+ a; +-1 is essential spectrum");
  if (gap_right > 0.0 && gap_left < 0.0) return 1;
  if (gap_right < 0.0 && gap_left > 0.0) return 2;
  return std::nullopt;
}

struct DecayCertificate {
  int branch = 0;
  ChiralSign sign = ChiralSign::Plus;
  double delta_lo = 0.0;   // lower tail rate, in (0, 1)
  double delta_hi = 0.0;   // upper tail rate, in (0, 1)
  double lambda_lo = 0.0;  // inf_x Lambda(sa a(x)) + 1
  double lambda_hi = 0.0;  // sup_x Lambda(sa a(x)) + 1
  double epsilon = 0.0;
  double c_lo = 0.0;       // -log(delta_lo - eps) >= c_hi
  double c_hi = 0.0;       // -log(delta_hi + eps)
  double kappa_lo = 0.0;   // |psi(0)|^2 lambda_lo
  double kappa_hi = 0.0;   // |psi(0)|^2 lambda_hi
  std::int64_t onset = 0;  // first |x| from which the sandwich holds
};

struct EigenstateBundle {
  ChiralSign sign = ChiralSign::Plus;
  int branch = 0;
  std::int64_t x_lo = 0;
  std::int64_t x_hi = 0;
  std::vector<double> log_psi_mag;          // log |psi(x)|, index x - x_lo
  std::vector<double> psi_sign;             // +-1, psi is real
  std::vector<Eigen::Vector2cd> spinor;     // Psi(x)
  double residual = 0.0;                    // interior max ||(U -+ 1) Psi||
  std::optional<DecayCertificate> certificate;

  std::int64_t size() const { return x_hi - x_lo + 1; }
  double psi(std::int64_t x) const {
    const size_t i = static_cast<size_t>(x - x_lo);
    return psi_sign[i] * std::exp(log_psi_mag[i]);
  }
  double log_spinor_norm_sq(std::int64_t x) const {
    const size_t i = static_cast<size_t>(x - x_lo);
    return log_lambda_plus_one[i] + 2.0 * log_psi_mag[i];
  }

  std::vector<double> log_lambda_plus_one;  // log(Lambda(sa a(x)) + 1)
};

inline constexpr double kBoundaryMassShare = 1e-3;

inline EigenstateBundle build_eigenstate(const SplitStepModel& model,
                                         ChiralSign sign, std::int64_t x_lo,
                                         std::int64_t x_hi) {
  if (x_lo > 0 || x_hi < 0 || x_hi - x_lo < 4)
    throw Error(ErrorCode::SchemaError,
                "window must contain 0 with a few sites of margin");
  const std::optional<int> branch = series_branch(model, sign);
  if (!branch)
    throw Error(ErrorCode::ZeroIndex,
                "no protected eigenstate: the signed index vanishes");
  const DeltaProfile profile = delta_profile(model, *branch, sign);
  const double s = (sign == ChiralSign::Plus) ? 1.0 : -1.0;
  const double sa = lower_sign(sign) * ((*branch == 1) ? -1.0 : 1.0);

  EigenstateBundle bundle;
  bundle.sign = sign;
  bundle.branch = *branch;
  bundle.x_lo = x_lo;
  bundle.x_hi = x_hi;
  const size_t len = static_cast<size_t>(x_hi - x_lo + 1);
  bundle.log_psi_mag.assign(len, 0.0);
  bundle.psi_sign.assign(len, 1.0);
  auto idx = [x_lo](std::int64_t x) { return static_cast<size_t>(x - x_lo); };

  // psi(0) = 1; forward recursion, backward division.
  for (std::int64_t x = 1; x <= x_hi; ++x) {
    bundle.log_psi_mag[idx(x)] =
        bundle.log_psi_mag[idx(x - 1)] + profile.log_at(x - 1);
    bundle.psi_sign[idx(x)] = s * bundle.psi_sign[idx(x - 1)];
  }
  for (std::int64_t x = -1; x >= x_lo; --x) {
    bundle.log_psi_mag[idx(x)] =
        bundle.log_psi_mag[idx(x + 1)] - profile.log_at(x);
    bundle.psi_sign[idx(x)] = s * bundle.psi_sign[idx(x + 1)];
  }

  // Psi(x) = (sa sqrt(Lambda(sa a(x))) psi(x), psi(x)).
  bundle.spinor.resize(len);
  bundle.log_lambda_plus_one.assign(len, 0.0);
  for (std::int64_t x = x_lo; x <= x_hi; ++x) {
    const double lam = std::exp(2.0 * std::atanh(sa * model.a.value_at(x)));
    const double psi = bundle.psi(x);
    bundle.spinor[idx(x)] = Eigen::Vector2cd(sa * std::sqrt(lam) * psi, psi);
    bundle.log_lambda_plus_one[idx(x)] = std::log1p(lam);
  }

  // Boundary-mass guard: the window must contain essentially all of Psi.
  double total = 0.0;
  for (const auto& v : bundle.spinor) total += v.squaredNorm();
  const double edge = bundle.spinor.front().squaredNorm() +
                      bundle.spinor.back().squaredNorm();
  if (edge > kBoundaryMassShare * total)
    throw Error(ErrorCode::WindowTooSmall,
                "boundary mass exceeds 1e-3 of the total; widen the window");

  // Interior residual of (U -+ 1) Psi via direct application.
  const StrictlyLocalOperatorSpec u = evolution_operator(model);
  oracle::SiteVector v;
  v.start = x_lo;
  for (std::int64_t x = x_lo; x <= x_hi; ++x)
    v.values.push_back(bundle.spinor[idx(x)]);
  const oracle::SiteVector uv = oracle::apply(u, v);
  double worst = 0.0;
  const int k0 = u.bandwidth();
  for (std::int64_t x = x_lo + k0; x <= x_hi - k0; ++x)
    worst = std::max(
        worst, (uv.at(x, 2) - s * v.at(x, 2)).norm());
  bundle.residual = worst;
  return bundle;
}

// Certified exponential envelope around ||Psi(x)||^2. The tail rates come
// from the averaged parameters, eps keeps both 0 < delta_lo - eps and
// delta_hi + eps < 1, and the onset is found by scanning outward from 0.
inline DecayCertificate decay_certificate(const EigenstateBundle& bundle,
                                          const SplitStepModel& model) {
  DecayCertificate cert;
  cert.branch = bundle.branch;
  cert.sign = bundle.sign;
  const double lower = lower_sign(bundle.sign);
  const double sj = (bundle.branch == 1) ? -1.0 : 1.0;  // (-1)^j
  const double sa = lower * sj;

  const TailAverages left = tail_average(model, Side::Left);
  const TailAverages right = tail_average(model, Side::Right);
  // log of Lambda(p(side)) Lambda(-+ a(side))
  const double lp_left =
      2.0 * std::atanh(left.p_avg) + 2.0 * std::atanh(lower * left.a_avg);
  const double lp_right =
      2.0 * std::atanh(right.p_avg) + 2.0 * std::atanh(lower * right.a_avg);
  const double rate_left = std::exp(-sj * lp_left);  // exponent (-1)^(j+1)
  const double rate_right = std::exp(sj * lp_right); // exponent (-1)^j
  cert.delta_lo = std::min(rate_left, rate_right);
  cert.delta_hi = std::max(rate_left, rate_right);
  if (!(cert.delta_lo > 0.0) || !(cert.delta_hi < 1.0))
    throw Error(ErrorCode::InternalError,
                "tail rates escaped (0, 1); branch selection is inconsistent");

  auto lam_bounds = [&](const ScalarSequence& seq) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto visit = [&](double v) {
      const double lam = std::exp(2.0 * std::atanh(sa * v));
      lo = std::min(lo, lam);
      hi = std::max(hi, lam);
    };
    for (double v : seq.left_tail()) visit(v);
    for (double v : seq.right_tail()) visit(v);
    for (double v : seq.core_values()) visit(v);
    return std::pair(lo, hi);
  };
  const auto [lam_lo, lam_hi] = lam_bounds(model.a);
  cert.lambda_lo = lam_lo + 1.0;
  cert.lambda_hi = lam_hi + 1.0;

  // "Small enough" eps: stay clear of both ends of (0, 1).
  cert.epsilon = std::min((1.0 - cert.delta_hi) / 2.0, cert.delta_lo / 2.0);
  cert.c_lo = -std::log(cert.delta_lo - cert.epsilon);
  cert.c_hi = -std::log(cert.delta_hi + cert.epsilon);
  const double psi0_sq = 1.0;  // normalization psi(0) = 1
  cert.kappa_lo = psi0_sq * cert.lambda_lo;
  cert.kappa_hi = psi0_sq * cert.lambda_hi;

  // Onset scan: smallest X so that the sandwich holds on X <= |x| <= edge.
  const std::int64_t reach = std::min(-bundle.x_lo, bundle.x_hi);
  auto holds_at = [&](std::int64_t x) {
    const double log_norm = bundle.log_spinor_norm_sq(x);
    const double ax = static_cast<double>(std::llabs(x));
    const double lo_bound = std::log(cert.kappa_lo) - cert.c_lo * ax;
    const double hi_bound = std::log(cert.kappa_hi) - cert.c_hi * ax;
    return lo_bound <= log_norm + 1e-12 && log_norm <= hi_bound + 1e-12;
  };
  std::optional<std::int64_t> onset;
  for (std::int64_t X = 0; X <= reach; ++X) {
    bool all = true;
    for (std::int64_t x = X; x <= reach && all; ++x)
      all = holds_at(x) && holds_at(-x);
    if (all) {
      onset = X;
      break;
    }
  }
  if (!onset)
    throw Error(ErrorCode::SandwichFailure,
                "no onset within the window satisfies the decay sandwich");
  cert.onset = *onset;
  return cert;
}

}  // namespace chiralwalk
