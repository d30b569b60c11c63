#pragma once

// Doubly-infinite sequences with exactly periodic tails and a finite core
// window. value_at is total on Z: core values inside the window, otherwise
// the tail entry selected by the phase x mod n, normalized into [0, n).
// Both tails anchor the phase at the absolute site x, not at the distance
// from the core, so phase tables survive shifts and refinements exactly.

#include <cstdint>
#include <numeric>
#include <vector>

#include "chiralwalk/error.hpp"

namespace chiralwalk {

inline int phase_mod(std::int64_t x, int n) {
  const std::int64_t r = x % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

template <typename T>
class PeriodicTailSequence {
 public:
  PeriodicTailSequence(std::vector<T> left_tail, std::vector<T> right_tail,
                       std::int64_t core_start = 0, std::vector<T> core = {})
      : left_(std::move(left_tail)),
        right_(std::move(right_tail)),
        core_(std::move(core)),
        core_start_(core_start) {
    if (left_.empty() || right_.empty())
      throw Error(ErrorCode::SchemaError, "tails must be non-empty");
  }

  static PeriodicTailSequence constant(T v) {
    return PeriodicTailSequence({v}, {v});
  }

  int left_period() const { return static_cast<int>(left_.size()); }
  int right_period() const { return static_cast<int>(right_.size()); }
  std::int64_t core_start() const { return core_start_; }
  std::int64_t core_end() const {
    return core_start_ + static_cast<std::int64_t>(core_.size());
  }
  const std::vector<T>& left_tail() const { return left_; }
  const std::vector<T>& right_tail() const { return right_; }
  const std::vector<T>& core_values() const { return core_; }

  const T& value_at(std::int64_t x) const {
    if (x >= core_start_ && x < core_end())
      return core_[static_cast<size_t>(x - core_start_)];
    if (x < core_start_) return left_[static_cast<size_t>(phase_mod(x, left_period()))];
    return right_[static_cast<size_t>(phase_mod(x, right_period()))];
  }

  // Tail limit along the residue class m; valid for any period that is a
  // multiple of the stored one, thanks to the absolute phase anchoring.
  const T& left_limit(std::int64_t m) const {
    return left_[static_cast<size_t>(phase_mod(m, left_period()))];
  }
  const T& right_limit(std::int64_t m) const {
    return right_[static_cast<size_t>(phase_mod(m, right_period()))];
  }
  const T& limit(bool right_side, std::int64_t m) const {
    return right_side ? right_limit(m) : left_limit(m);
  }

  // The sequence x |-> value_at(x + delta). Tails rotate by the phase of
  // delta; the core window slides. Exact for any delta.
  PeriodicTailSequence shifted(std::int64_t delta) const {
    std::vector<T> l(left_.size()), r(right_.size());
    for (size_t m = 0; m < left_.size(); ++m)
      l[m] = left_[static_cast<size_t>(
          phase_mod(static_cast<std::int64_t>(m) + delta, left_period()))];
    for (size_t m = 0; m < right_.size(); ++m)
      r[m] = right_[static_cast<size_t>(
          phase_mod(static_cast<std::int64_t>(m) + delta, right_period()))];
    return PeriodicTailSequence(std::move(l), std::move(r),
                                core_start_ - delta, core_);
  }

  template <typename F>
  auto map(F f) const -> PeriodicTailSequence<decltype(f(std::declval<T>()))> {
    using U = decltype(f(std::declval<T>()));
    std::vector<U> l, r, c;
    l.reserve(left_.size());
    r.reserve(right_.size());
    c.reserve(core_.size());
    for (const T& v : left_) l.push_back(f(v));
    for (const T& v : right_) r.push_back(f(v));
    for (const T& v : core_) c.push_back(f(v));
    return PeriodicTailSequence<U>(std::move(l), std::move(r), core_start_,
                                   std::move(c));
  }

 private:
  std::vector<T> left_;
  std::vector<T> right_;
  std::vector<T> core_;
  std::int64_t core_start_;
};

// Pointwise combination of several sequences into one, on the common
// refinement: tail periods go to the lcm, the core window to the union of
// core windows (which also absorbs any straddled junction between regimes).
// The result is exact, not a truncation.
template <typename Out, typename In, typename F>
PeriodicTailSequence<Out> zip_sequences(
    const std::vector<PeriodicTailSequence<In>>& seqs, F f) {
  if (seqs.empty())
    throw Error(ErrorCode::InternalError, "zip_sequences needs input");
  int nl = 1, nr = 1;
  std::int64_t cs = seqs[0].core_start();
  std::int64_t ce = seqs[0].core_end();
  for (const auto& s : seqs) {
    nl = static_cast<int>(std::lcm(nl, s.left_period()));
    nr = static_cast<int>(std::lcm(nr, s.right_period()));
    cs = std::min(cs, s.core_start());
    ce = std::max(ce, s.core_end());
  }
  std::vector<In> vals(seqs.size());
  auto eval = [&](std::int64_t x) -> Out {
    for (size_t i = 0; i < seqs.size(); ++i) vals[i] = seqs[i].value_at(x);
    return f(vals);
  };
  std::vector<Out> core;
  core.reserve(static_cast<size_t>(ce - cs));
  for (std::int64_t x = cs; x < ce; ++x) core.push_back(eval(x));
  std::vector<Out> left, right;
  left.reserve(static_cast<size_t>(nl));
  right.reserve(static_cast<size_t>(nr));
  for (int m = 0; m < nl; ++m) {
    // largest x < cs in the residue class m mod nl
    const std::int64_t x = cs - 1 - phase_mod(cs - 1 - m, nl);
    left.push_back(eval(x));
  }
  for (int m = 0; m < nr; ++m) {
    const std::int64_t x = ce + phase_mod(m - ce, nr);
    right.push_back(eval(x));
  }
  return PeriodicTailSequence<Out>(std::move(left), std::move(right), cs,
                                   std::move(core));
}

template <typename Out, typename A, typename B, typename F>
PeriodicTailSequence<Out> combine(const PeriodicTailSequence<A>& a,
                                  const PeriodicTailSequence<B>& b, F f) {
  static_assert(std::is_same_v<A, B>, "combine expects matching value types");
  std::vector<PeriodicTailSequence<A>> ss{a, b};
  return zip_sequences<Out>(ss, [&](const std::vector<A>& v) -> Out {
    return f(v[0], v[1]);
  });
}

// Largest pointwise distance between two sequences, evaluated over the core
// windows extended by a full common period on each side. Eventual
// periodicity makes this an exact equality certificate, not a sample.
template <typename T, typename Dist>
double sequence_distance(const PeriodicTailSequence<T>& a,
                         const PeriodicTailSequence<T>& b, Dist dist) {
  const int nl = static_cast<int>(std::lcm(a.left_period(), b.left_period()));
  const int nr =
      static_cast<int>(std::lcm(a.right_period(), b.right_period()));
  const std::int64_t lo = std::min(a.core_start(), b.core_start()) - 2 * nl;
  const std::int64_t hi = std::max(a.core_end(), b.core_end()) + 2 * nr;
  double worst = 0.0;
  for (std::int64_t x = lo; x < hi; ++x)
    worst = std::max(worst, dist(a.value_at(x), b.value_at(x)));
  return worst;
}

}  // namespace chiralwalk
