#pragma once

// Essential spectra of banded operators with periodic tails, extracted from
// their symbol families: either as real bands (Hermitian-valued symbols,
// eigenvalue branches swept over the circle) or as a tagged point cloud for
// general symbols. Band endpoints are sharpened by ternary search on the
// extremal branch around the sampled extremum.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "chiralwalk/lattice.hpp"
#include "chiralwalk/numkernel.hpp"

namespace chiralwalk {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Arc {
  double lo = 0.0;  // radians, in [0, 2*pi)
  double hi = 0.0;  // radians, in (0, 2*pi]; hi = 2*pi only for wrap-closure
};

struct SpectralBands {
  std::vector<Interval> intervals;  // sorted, pairwise disjoint
  std::vector<Arc> arcs;            // conjugation-symmetric arc set
  double resolution = 0.0;          // endpoint uncertainty estimate
  std::optional<bool> singleton;    // set by closed-form band evaluation
  std::optional<bool> connected;    // set by closed-form band evaluation
};

inline constexpr int kDefaultBandSamples = 1024;
inline constexpr double kMergeTol = 1e-9;
inline constexpr double kResolutionFloor = 1e-9;

inline std::vector<Interval> merge_intervals(std::vector<Interval> raw,
                                             double merge_tol = kMergeTol) {
  if (raw.empty()) return raw;
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  out.push_back(raw.front());
  for (size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].lo <= out.back().hi + merge_tol)
      out.back().hi = std::max(out.back().hi, raw[i].hi);
    else
      out.push_back(raw[i]);
  }
  return out;
}

inline double distance_to_intervals(double x,
                                    const std::vector<Interval>& intervals) {
  double best = std::numeric_limits<double>::infinity();
  for (const Interval& iv : intervals) {
    if (x < iv.lo)
      best = std::min(best, iv.lo - x);
    else if (x > iv.hi)
      best = std::min(best, x - iv.hi);
    else
      return 0.0;
  }
  return best;
}

// Arcs {e^{i theta} : cos(theta) in intervals}: each band [lo, hi] inside
// [-1, 1] contributes [acos(hi), acos(lo)] and its conjugate mirror. A set
// covering the whole circle collapses to the single arc [0, 2*pi].
inline std::vector<Arc> arcs_from_intervals(std::vector<Interval> intervals) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Arc> raw;
  for (Interval iv : intervals) {
    const double lo = std::clamp(iv.lo, -1.0, 1.0);
    const double hi = std::clamp(iv.hi, -1.0, 1.0);
    if (lo > hi) continue;
    const double a = std::acos(hi);  // in [0, pi]
    const double b = std::acos(lo);
    raw.push_back({a, b});
    raw.push_back({two_pi - b, two_pi - a});
  }
  if (raw.empty()) return raw;
  std::sort(raw.begin(), raw.end(),
            [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
  std::vector<Arc> out;
  out.push_back(raw.front());
  for (size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].lo <= out.back().hi + 1e-12)
      out.back().hi = std::max(out.back().hi, raw[i].hi);
    else
      out.push_back(raw[i]);
  }
  if (out.size() == 1 && out.front().lo <= 1e-12 &&
      out.front().hi >= two_pi - 1e-12)
    out.front() = {0.0, two_pi};
  return out;
}

// Distance from a point of the plane to the arc set on the unit circle.
inline double distance_to_arcs(Complex z, const std::vector<Arc>& arcs) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double r = std::abs(z);
  if (arcs.empty()) return std::numeric_limits<double>::infinity();
  double theta = std::arg(z);
  if (theta < 0) theta += two_pi;
  double ang = std::numeric_limits<double>::infinity();
  for (const Arc& a : arcs) {
    if (theta >= a.lo && theta <= a.hi) {
      ang = 0.0;
      break;
    }
    for (double d : {std::abs(theta - a.lo), std::abs(theta - a.hi)}) {
      d = std::min(d, two_pi - d);  // wrap-around angular distance
      ang = std::min(ang, d);
    }
  }
  const double chord = 2.0 * std::sin(std::min(ang, std::numbers::pi) / 2.0);
  return std::hypot(r - 1.0, r * chord);
}

// ---------------------------------------------------------------------------
// Band sweep over Hermitian symbol families

using HermitianFamily = std::function<ComplexMatrix(Complex)>;

namespace detail {

struct BandSweep {
  std::vector<Interval> intervals;  // merged
  double resolution = kResolutionFloor;
};

inline std::vector<double> family_eigs(const HermitianFamily& family,
                                       double theta) {
  const ComplexMatrix m = family(std::polar(1.0, theta));
  if (hermitian_defect(m) > kHermitianTol)
    throw Error(ErrorCode::NotHermitianFamily,
                "symbol family is not Hermitian-valued");
  return hermitian_eigenvalues(m);
}

// Ternary search for the extremum of one sorted-eigenvalue branch on a
// bracket around the sampled extremum. Returns the refined value and the
// width of the final image bracket (endpoint uncertainty).
inline std::pair<double, double> refine_extremum(const HermitianFamily& family,
                                                 int branch, double center,
                                                 double step, bool maximize) {
  auto g = [&](double theta) {
    return family_eigs(family, theta)[static_cast<size_t>(branch)];
  };
  double a = center - step;
  double b = center + step;
  for (int it = 0; it < 64 && (b - a) > 1e-13; ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    const double g1 = g(m1), g2 = g(m2);
    if ((g1 < g2) == maximize)
      a = m1;
    else
      b = m2;
  }
  const double ga = g(a), gb = g(b), gc = g((a + b) / 2.0);
  const double best = maximize ? std::max({ga, gb, gc}) : std::min({ga, gb, gc});
  const double spread = std::max({ga, gb, gc}) - std::min({ga, gb, gc});
  return {best, spread};
}

inline BandSweep sweep_families(const std::vector<HermitianFamily>& families,
                                int samples, double merge_tol = kMergeTol) {
  const double two_pi = 2.0 * std::numbers::pi;
  BandSweep out;
  std::vector<Interval> raw;
  double uncertainty = kResolutionFloor;
  for (const HermitianFamily& family : families) {
    const int dim = static_cast<int>(family(Complex(1.0, 0.0)).rows());
    const int m = std::max(8, samples);
    std::vector<std::vector<double>> branch(
        static_cast<size_t>(dim), std::vector<double>(static_cast<size_t>(m)));
    for (int t = 0; t < m; ++t) {
      const auto eigs = family_eigs(family, two_pi * t / m);
      for (int j = 0; j < dim; ++j)
        branch[static_cast<size_t>(j)][static_cast<size_t>(t)] =
            eigs[static_cast<size_t>(j)];
    }
    const double step = two_pi / m;
    for (int j = 0; j < dim; ++j) {
      const auto& vals = branch[static_cast<size_t>(j)];
      const auto mn = std::min_element(vals.begin(), vals.end());
      const auto mx = std::max_element(vals.begin(), vals.end());
      const double t_min = step * static_cast<double>(mn - vals.begin());
      const double t_max = step * static_cast<double>(mx - vals.begin());
      auto [lo, lo_unc] = refine_extremum(family, j, t_min, step, false);
      auto [hi, hi_unc] = refine_extremum(family, j, t_max, step, true);
      raw.push_back({std::min(lo, *mn), std::max(hi, *mx)});
      uncertainty = std::max({uncertainty, lo_unc, hi_unc});
    }
  }
  out.intervals = merge_intervals(std::move(raw), merge_tol);
  out.resolution = uncertainty;
  return out;
}

}  // namespace detail

// Bands of a formally self-adjoint operator: per side, sorted eigenvalue
// branches of the symbol are swept over the circle; every branch contributes
// the interval [min, max] (continuous branches of a continuous Hermitian
// family), and the union is merged across branches and sides.
inline SpectralBands essential_spectrum_bands(
    const StrictlyLocalOperatorSpec& op, int samples = kDefaultBandSamples) {
  std::vector<HermitianFamily> families;
  for (Side side : {Side::Left, Side::Right})
    families.push_back(
        [&op, side](Complex z) { return symbol_at(op, side, z); });
  const auto sweep = detail::sweep_families(families, samples);
  SpectralBands bands;
  bands.intervals = sweep.intervals;
  bands.resolution = sweep.resolution;
  bands.arcs = arcs_from_intervals(bands.intervals);
  return bands;
}

// One-sided variant, for comparisons against per-side closed forms.
inline SpectralBands essential_spectrum_bands_side(
    const StrictlyLocalOperatorSpec& op, Side side,
    int samples = kDefaultBandSamples) {
  std::vector<HermitianFamily> families{
      [&op, side](Complex z) { return symbol_at(op, side, z); }};
  const auto sweep = detail::sweep_families(families, samples);
  SpectralBands bands;
  bands.intervals = sweep.intervals;
  bands.resolution = sweep.resolution;
  bands.arcs = arcs_from_intervals(bands.intervals);
  return bands;
}

// ---------------------------------------------------------------------------
// Point cloud for general (non-normal) symbols

struct CloudPoint {
  Complex value;
  Side side = Side::Left;
  double theta = 0.0;
};

struct SpectralCloud {
  std::vector<CloudPoint> points;
  double grid_spacing = 0.0;  // angular resolution metadata
};

inline SpectralCloud essential_spectrum_cloud(
    const StrictlyLocalOperatorSpec& op, int samples = kDefaultBandSamples) {
  const double two_pi = 2.0 * std::numbers::pi;
  SpectralCloud cloud;
  const int m = std::max(8, samples);
  cloud.grid_spacing = two_pi / m;
  for (Side side : {Side::Left, Side::Right}) {
    for (int t = 0; t < m; ++t) {
      const double theta = two_pi * t / m;
      const ComplexMatrix sym = symbol_at(op, side, std::polar(1.0, theta));
      for (const Complex& lambda : general_eigenvalues(sym))
        cloud.points.push_back({lambda, side, theta});
    }
  }
  return cloud;
}

}  // namespace chiralwalk
