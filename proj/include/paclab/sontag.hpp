#pragma once

// Sontag's single-input sigmoidal network. Two hidden units with activation
// phi receive w*x and -w*x; the output perceptron adds them with unit weights
// and thresholds at one, so the output is eta(phi(wx) + phi(-wx) - 1), which
// simplifies to eta(rho(x)) with rho(x) = 2 cos(wx) / (alpha (1 + w^2 x^2)).
// Since the prefactor is positive the output is exactly [cos(wx) >= 0], and
// everything downstream (arc sets, the shattering search) works with that
// sign law.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "paclab/error.hpp"
#include "paclab/interval_set.hpp"
#include "paclab/parallel.hpp"

namespace paclab::sontag {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;
inline constexpr double kDefaultAlpha = 100.0;

struct SontagParams {
  double w = 0.0;
  double alpha = kDefaultAlpha;

  void validate() const {
    require(alpha >= kTwoPi, "Sontag activation constant must satisfy alpha >= 2*pi");
    require(std::isfinite(w), "Sontag weight must be finite");
  }
};

inline double phi(double x, double alpha) {
  return std::atan(x) / kPi + std::cos(x) / (alpha * (1.0 + x * x)) + 0.5;
}

inline double rho(double x, double w, double alpha) {
  const double wx = w * x;
  return 2.0 * std::cos(wx) / (alpha * (1.0 + wx * wx));
}

// Threshold unit; eta(0) = 1.
inline int eta(double t) { return t >= 0.0 ? 1 : 0; }

// Pre-activation of the output perceptron computed through the two hidden
// units rather than the closed form.
inline double composed_preactivation(double x, const SontagParams& p) {
  const double wx = p.w * x;
  return phi(wx, p.alpha) + phi(-wx, p.alpha) - 1.0;
}

inline int net_output(double x, const SontagParams& p) { return eta(rho(x, p.w, p.alpha)); }

// Length of {t in [0, theta] : cos t >= 0} for theta >= 0.
inline double positive_cos_length(double theta) {
  const double periods = std::floor(theta / kTwoPi);
  const double r = theta - periods * kTwoPi;
  return periods * kPi + std::min(r, kHalfPi) + std::max(0.0, r - 1.5 * kPi);
}

// Lebesgue measure of {x in [a, b] : cos(w x) >= 0}, in O(1).
inline double positive_arc_measure(double a, double b, double w) {
  if (b <= a) return 0.0;
  w = std::abs(w);
  if (w == 0.0) return b - a;
  // cos is even, so the length of the set in [a, b] splits at zero.
  auto from_zero = [w](double t) { return positive_cos_length(std::abs(t) * w) / w; };
  if (a >= 0.0) return from_zero(b) - from_zero(a);
  if (b <= 0.0) return from_zero(a) - from_zero(b);
  return from_zero(a) + from_zero(b);
}

// Closed arcs {x in [lo, hi] : cos(w x) >= 0}. Returns nullopt when the
// arc count would exceed max_arcs.
inline std::optional<IntervalSet> positive_arcs(double w, double lo, double hi,
                                                std::size_t max_arcs) {
  w = std::abs(w);
  if (w == 0.0 || hi < lo) return IntervalSet::single(Interval::closed(lo, std::max(lo, hi)));
  const double span_periods = (hi - lo) * w / kTwoPi;
  if (span_periods + 2.0 > static_cast<double>(max_arcs)) return std::nullopt;
  const auto k_first = static_cast<long long>(std::floor(lo * w / kTwoPi)) - 1;
  const auto k_last = static_cast<long long>(std::ceil(hi * w / kTwoPi)) + 1;
  std::vector<Interval> arcs;
  for (long long k = k_first; k <= k_last; ++k) {
    const double c = static_cast<double>(k) * kTwoPi;
    arcs.push_back(Interval::closed((c - kHalfPi) / w, (c + kHalfPi) / w));
  }
  return IntervalSet(std::move(arcs)).clip(lo, hi);
}

// ---------------------------------------------------------------------------
// Weight-space geometry.

using ArcSet = IntervalSet;

// Weights w in [0, w_max] for which the network labels x with `label`. For
// x = 0 and label 0 the result is empty (unsatisfiable).
inline ArcSet feasible_weights(double x, int label, double w_max) {
  require(w_max > 0.0, "feasible_weights: w_max must be positive");
  const double a = std::abs(x);
  if (a == 0.0) {
    return label ? ArcSet::single(Interval::closed(0.0, w_max)) : ArcSet{};
  }
  std::vector<Interval> ones;
  const auto k_last = static_cast<long long>(std::ceil(w_max * a / kTwoPi)) + 1;
  for (long long k = 0; k <= k_last; ++k) {
    const double c = static_cast<double>(k) * kTwoPi;
    ones.push_back(Interval::closed((c - kHalfPi) / a, (c + kHalfPi) / a));
  }
  ArcSet positive = ArcSet(std::move(ones)).clip(0.0, w_max);
  return label ? positive : positive.complement(0.0, w_max);
}

enum class SearchStatus { found, infeasible, budget_exceeded };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::infeasible: return "infeasible";
    case SearchStatus::budget_exceeded: return "budget_exceeded";
  }
  return "unknown";
}

struct ShatterResult {
  std::vector<int> labels;
  std::optional<double> witness;
  std::optional<double> infimum;  // inf of the feasible set; the witness sits in its component
  SearchStatus status = SearchStatus::infeasible;
  double range_lo = 0.0;
  double range_hi = 0.0;
  std::uint64_t breakpoints = 0;
};

struct SearchOptions {
  double w_min = 0.0;
  double w_max = 1e4;
  double alpha = kDefaultAlpha;
  std::uint64_t budget = 100'000'000;
};

namespace detail {

// A sweep position: the point w itself, or (open == true) the points just to
// the right of w.
struct Position {
  double w = 0.0;
  bool open = false;
};

inline bool later(const Position& a, const Position& b) {
  return a.w > b.w || (a.w == b.w && a.open && !b.open);
}

inline bool covers(const Interval& arc, const Position& p) {
  const bool above = arc.lo_closed || p.open ? p.w >= arc.lo : p.w > arc.lo;
  const bool below = p.open ? p.w < arc.hi : (arc.hi_closed ? p.w <= arc.hi : p.w < arc.hi);
  return above && below;
}

struct ArcQuery {
  bool contained = false;
  Interval arc;  // containing arc, or the next arc to the right
};

// Arc k of the feasible set of one point: closed arcs around the zeros of
// phase 2k*pi for label 1, the open gaps between them for label 0.
inline Interval arc_of(double a, int label, long long k) {
  const double c = static_cast<double>(k) * kTwoPi;
  if (label) return Interval::closed((c - kHalfPi) / a, (c + kHalfPi) / a);
  const double c_next = c + kTwoPi;
  return Interval::open((c + kHalfPi) / a, (c_next - kHalfPi) / a);
}

inline ArcQuery query(double x, int label, const Position& pos) {
  const double a = std::abs(x);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a == 0.0) {
    if (label) return {true, Interval::closed(-inf, inf)};
    return {false, Interval::closed(inf, inf)};
  }
  const auto k0 = static_cast<long long>(std::floor(pos.w * a / kTwoPi));
  ArcQuery best{false, Interval::closed(inf, inf)};
  for (long long k = k0 - 1; k <= k0 + 2; ++k) {
    const Interval arc = arc_of(a, label, k);
    if (covers(arc, pos)) return {true, arc};
    const Position start{arc.lo, !arc.lo_closed};
    if (later(start, pos) && later(Position{best.arc.lo, !best.arc.lo_closed}, start)) {
      best.arc = arc;
    }
  }
  return best;
}

}  // namespace detail

// Least weight in [w_min, w_max] realizing `labels` on `points`. The sweep
// walks forward through the breakpoints of the per-point feasible arc sets,
// always jumping to the next arc start of a violated point, so the first
// position covered by every arc set is the infimum of their intersection.
// When that infimum is an open endpoint, or the endpoint itself fails to
// verify under rounding, the witness moves to the midpoint of the
// intersection component. Every returned witness reproduces all labels
// through net_output.
inline ShatterResult shatter_search(std::span<const double> points, std::span<const int> labels,
                                    const SearchOptions& opt = {}) {
  require(points.size() == labels.size(), "shatter_search: points/labels length mismatch");
  require(opt.w_max >= opt.w_min && opt.w_min >= 0.0, "shatter_search: bad weight range");
  ShatterResult result;
  result.labels.assign(labels.begin(), labels.end());
  result.range_lo = opt.w_min;
  result.range_hi = opt.w_max;
  const SontagParams probe{0.0, opt.alpha};
  probe.validate();
  const std::size_t n = points.size();
  if (n == 0) {
    result.witness = opt.w_min;
    result.infimum = opt.w_min;
    result.status = SearchStatus::found;
    return result;
  }

  auto out_of_range = [&](const detail::Position& p) {
    return p.w > opt.w_max || (p.w == opt.w_max && p.open);
  };
  auto verifies = [&](double w) {
    const SontagParams params{w, opt.alpha};
    for (std::size_t i = 0; i < n; ++i) {
      if (net_output(points[i], params) != labels[i]) return false;
    }
    return true;
  };

  detail::Position pos{opt.w_min, false};
  std::size_t idx = 0;
  std::size_t satisfied = 0;
  std::uint64_t hops = 0;
  while (true) {
    if (out_of_range(pos)) {
      result.status = SearchStatus::infeasible;
      result.breakpoints = hops;
      return result;
    }
    if (hops > opt.budget) {
      result.status = SearchStatus::budget_exceeded;
      result.range_hi = pos.w;
      result.breakpoints = hops;
      return result;
    }
    const auto q = detail::query(points[idx], labels[idx] ? 1 : 0, pos);
    if (q.contained) {
      ++satisfied;
    } else {
      pos = {q.arc.lo, !q.arc.lo_closed};
      satisfied = 1;
      ++hops;
    }
    idx = (idx + 1) % n;
    if (satisfied < n || out_of_range(pos)) continue;

    // Every arc set covers pos: find where the intersection component ends.
    Interval component{pos.w, opt.w_max, !pos.open, true};
    for (std::size_t i = 0; i < n; ++i) {
      const auto qi = detail::query(points[i], labels[i] ? 1 : 0, pos);
      ensure(qi.contained, "shatter_search: sweep position left an arc set");
      if (qi.arc.hi < component.hi || (qi.arc.hi == component.hi && !qi.arc.hi_closed)) {
        component.hi = qi.arc.hi;
        component.hi_closed = qi.arc.hi_closed;
      }
    }
    std::vector<double> candidates;
    if (!pos.open) candidates.push_back(pos.w);
    if (component.hi > component.lo) candidates.push_back(0.5 * (component.lo + component.hi));
    for (double w : candidates) {
      if (verifies(w)) {
        result.witness = w;
        result.infimum = component.lo;
        result.status = SearchStatus::found;
        result.breakpoints = hops;
        return result;
      }
    }
    // Rounding left this component unusable; resume past its right end.
    pos = {component.hi, component.hi_closed};
    satisfied = 0;
    ++hops;
  }
}

struct CensusResult {
  std::size_t realized = 0;
  std::size_t total = 0;
  std::size_t budget_exceeded = 0;
  std::vector<ShatterResult> per_labeling;  // indexed by labeling bitmask
};

// Runs shatter_search for all 2^n labelings; labeling m assigns bit j of m to
// point j.
inline CensusResult shatter_census(std::span<const double> points, const SearchOptions& opt = {},
                                   unsigned threads = 1) {
  require(points.size() <= 24, "shatter_census: at most 24 points");
  const std::size_t total = std::size_t{1} << points.size();
  CensusResult census;
  census.total = total;
  census.per_labeling.resize(total);
  parallel_for(total, threads, [&](std::size_t mask) {
    std::vector<int> labels(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) labels[j] = static_cast<int>((mask >> j) & 1U);
    census.per_labeling[mask] = shatter_search(points, labels, opt);
  });
  for (const auto& r : census.per_labeling) {
    if (r.status == SearchStatus::found) ++census.realized;
    if (r.status == SearchStatus::budget_exceeded) ++census.budget_exceeded;
  }
  return census;
}

inline std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> primes;
  if (count == 0) return primes;
  // Upper bound on the count-th prime (Rosser); the small-count floor covers n < 6.
  const double n = static_cast<double>(count);
  std::size_t limit = count < 6 ? 15 : static_cast<std::size_t>(n * (std::log(n) + std::log(std::log(n)))) + 1;
  std::vector<bool> composite(limit + 1, false);
  for (std::size_t i = 2; i <= limit && primes.size() < count; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  ensure(primes.size() == count, "first_primes: sieve bound too small");
  return primes;
}

// Logarithms of the first n primes. Over the rationals these are linearly
// independent together with 1 (unique factorization); as doubles they are of
// course rational, so shattering is always checked empirically.
inline std::vector<double> rationally_independent_points(std::size_t n) {
  require(n >= 1, "rationally_independent_points: n >= 1");
  std::vector<double> out;
  out.reserve(n);
  for (auto p : first_primes(n)) out.push_back(std::log(static_cast<double>(p)));
  return out;
}

}  // namespace paclab::sontag
