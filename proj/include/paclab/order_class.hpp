#pragma once

// The countable class built from unions of "order-n" intervals [i/n, (i+1)/n]:
// C_n holds the unions of fewer than sqrt(n) of them. Enumeration, the
// point-isolation construction showing every finite sample is shattered by
// some C_n, and the search for C_N unions separating Cantor level intervals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "paclab/cantor.hpp"
#include "paclab/concept.hpp"
#include "paclab/error.hpp"

namespace paclab::order_class {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Largest k with k^2 < n, in integer arithmetic.
constexpr std::uint64_t max_intervals(std::uint64_t n) {
  std::uint64_t k = 0;
  while ((k + 1) * (k + 1) < n) ++k;
  return k;
}

inline Interval order_interval(std::uint64_t n, std::uint64_t i) {
  return Interval::closed(static_cast<double>(i) / static_cast<double>(n),
                          static_cast<double>(i + 1) / static_cast<double>(n));
}

inline Concept union_of(std::uint64_t n, const std::vector<std::uint64_t>& indices) {
  std::vector<Interval> pieces;
  pieces.reserve(indices.size());
  for (auto i : indices) pieces.push_back(order_interval(n, i));
  return Concept::intervals(std::move(pieces));
}

// |C_n| = sum_{k <= max_intervals(n)} C(n, k), saturating at uint64 max.
inline std::uint64_t class_size(std::uint64_t n) {
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  long double binom = 1.0L;
  for (std::uint64_t k = 0; k <= max_intervals(n); ++k) {
    if (k > 0) binom = binom * static_cast<long double>(n - k + 1) / static_cast<long double>(k);
    const long double next = static_cast<long double>(total) + std::round(binom);
    if (next >= static_cast<long double>(top)) return top;
    total = static_cast<std::uint64_t>(next);
  }
  return total;
}

// Lazily enumerates C_n: the empty union first, then all k-subsets of
// {0, ..., n-1} in lexicographic order for k = 1, 2, ...
class OrderClassStream {
 public:
  explicit OrderClassStream(std::uint64_t n, std::uint64_t cap = kDefaultEnumerationCap)
      : n_(n), k_max_(max_intervals(n)) {
    require(n >= 1, "enumerate_order_class: n >= 1");
    if (class_size(n) > cap) {
      throw BudgetExceeded("enumerate_order_class: C_" + std::to_string(n) + " has more than " +
                           std::to_string(cap) + " members");
    }
  }

  std::uint64_t order() const { return n_; }

  // Index sets of the next member, or nullopt when exhausted.
  std::optional<std::vector<std::uint64_t>> next_indices() {
    if (done_) return std::nullopt;
    if (!started_) {
      started_ = true;
      return current_;  // empty union
    }
    if (!advance()) {
      done_ = true;
      return std::nullopt;
    }
    return current_;
  }

  std::optional<Concept> next() {
    auto idx = next_indices();
    if (!idx) return std::nullopt;
    return union_of(n_, *idx);
  }

 private:
  bool advance() {
    const std::uint64_t k = current_.size();
    // Next k-combination in lexicographic order.
    for (std::uint64_t pos = k; pos-- > 0;) {
      if (current_[pos] < n_ - k + pos) {
        ++current_[pos];
        for (std::uint64_t j = pos + 1; j < k; ++j) current_[j] = current_[j - 1] + 1;
        return true;
      }
    }
    if (k + 1 > k_max_ || k + 1 > n_) return false;
    current_.resize(k + 1);
    for (std::uint64_t j = 0; j <= k; ++j) current_[j] = j;
    return true;
  }

  std::uint64_t n_;
  std::uint64_t k_max_;
  std::vector<std::uint64_t> current_;
  bool started_ = false;
  bool done_ = false;
};

inline OrderClassStream enumerate_order_class(std::uint64_t n, std::uint64_t cap = kDefaultEnumerationCap) {
  return OrderClassStream(n, cap);
}

// Structural check that c is a member of C_n.
inline bool is_member_of_order_class(const Concept& c, std::uint64_t n) {
  const auto* u = c.as<IntervalUnion>();
  if (u == nullptr || n == 0) return false;
  if (u->intervals.size() > max_intervals(n)) return false;
  std::optional<std::uint64_t> previous;
  for (const auto& p : u->intervals) {
    const double scaled = p.lo * static_cast<double>(n);
    const double rounded = std::round(scaled);
    if (rounded < 0.0 || rounded >= static_cast<double>(n)) return false;
    const auto i = static_cast<std::uint64_t>(rounded);
    if (!(order_interval(n, i) == p)) return false;
    if (previous && *previous >= i) return false;
    previous = i;
  }
  return true;
}

// ---------------------------------------------------------------------------

struct Isolation {
  std::uint64_t order = 1;
  std::vector<std::uint64_t> indices;  // one order-n interval per point
  Concept hypothesis;
};

// For k distinct points in [0, 1]: the least n > k^2 with 1/n below every
// half-gap between neighbours, and the union of the order-n intervals
// holding the points. A point on the grid takes the interval whose left end
// it is (the last interval for x = 1).
inline Isolation isolate_points(std::vector<double> points) {
  Isolation out;
  if (points.empty()) return out;
  std::sort(points.begin(), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i] >= 0.0 && points[i] <= 1.0, "isolate_points: points must lie in [0, 1]");
    require(i == 0 || points[i - 1] < points[i], "isolate_points: points must be distinct");
  }
  const auto k = static_cast<std::uint64_t>(points.size());
  double half_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < points.size(); ++i) half_gap = std::min(half_gap, 0.5 * (points[i] - points[i - 1]));
  std::uint64_t n = k * k + 1;
  if (std::isfinite(half_gap)) {
    const double need = std::floor(1.0 / half_gap) + 1.0;
    require(need < 9e15, "isolate_points: points too close to isolate");
    n = std::max(n, static_cast<std::uint64_t>(need));
    while (!(1.0 / static_cast<double>(n) < half_gap)) ++n;
    while (n - 1 > k * k && 1.0 / static_cast<double>(n - 1) < half_gap) --n;
  }
  out.order = n;
  for (double p : points) {
    auto i = static_cast<std::uint64_t>(std::floor(p * static_cast<double>(n)));
    if (i >= n) i = n - 1;
    // Guard against p * n rounding across a grid line.
    while (i > 0 && !order_interval(n, i).contains(p)) --i;
    while (i + 1 < n && !order_interval(n, i).contains(p)) ++i;
    out.indices.push_back(i);
  }
  out.hypothesis = union_of(n, out.indices);
  return out;
}

// ---------------------------------------------------------------------------

enum class FeasibilityStatus { feasible, infeasible, unchecked };

inline const char* to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::feasible: return "feasible";
    case FeasibilityStatus::infeasible: return "infeasible";
    case FeasibilityStatus::unchecked: return "unchecked";
  }
  return "unknown";
}

struct CantorShatterReport {
  int level = 0;
  std::uint64_t order = 0;
  std::vector<std::uint64_t> selected;  // 0-based level-interval indices
  FeasibilityStatus status = FeasibilityStatus::unchecked;
  std::vector<std::uint64_t> forced;    // order-N intervals any valid union must contain
  std::optional<Concept> witness;
  std::string certificate;
};

struct CantorSearchLimits {
  int max_level = 4;
  std::uint64_t max_order = 1'000'000;
};

// Looks for a member of C_N containing every level-n Cantor interval in
// `selected` and disjoint from every other level-n interval. Any point in
// the interior of an order-N interval lies in no other order-N interval, so
// every order-N interval whose interior meets a selected Cantor interval is
// forced; the forced set is the unique minimal candidate and decides the
// question exactly.
inline CantorShatterReport cantor_shatter_search(int level, std::uint64_t order,
                                                 std::vector<std::uint64_t> selected,
                                                 const CantorSearchLimits& limits = {}) {
  CantorShatterReport report;
  report.level = level;
  report.order = order;
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
  report.selected = selected;
  if (level < 0 || level > limits.max_level || order < 1 || order > limits.max_order) {
    report.certificate = "outside the brute-force regime (level <= " + std::to_string(limits.max_level) +
                         ", order <= " + std::to_string(limits.max_order) + ")";
    return report;
  }
  const std::uint64_t count = std::uint64_t{1} << level;
  for (auto j : selected) require(j < count, "cantor_shatter_search: interval index out of range");
  const std::uint64_t den = cantor::pow3(level);
  const std::uint64_t N = order;

  std::vector<bool> chosen(count, false);
  for (auto j : selected) chosen[j] = true;

  std::vector<std::uint64_t> forced;
  for (auto j : selected) {
    const std::uint64_t a = cantor::level_numerator(level, j);
    const std::uint64_t first = (a * N) / den;
    const std::uint64_t last = ((a + 1) * N + den - 1) / den - 1;
    for (std::uint64_t i = first; i <= std::min(last, N - 1); ++i) forced.push_back(i);
  }
  std::sort(forced.begin(), forced.end());
  forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
  report.forced = forced;

  // Closed order-N interval i meets closed level interval [b, b+1]/den.
  auto meets = [&](std::uint64_t i, std::uint64_t b) { return i * den <= (b + 1) * N && (i + 1) * den >= b * N; };
  for (auto i : forced) {
    for (std::uint64_t k = 0; k < count; ++k) {
      if (chosen[k]) continue;
      if (meets(i, cantor::level_numerator(level, k))) {
        report.status = FeasibilityStatus::infeasible;
        report.certificate = "forced order-" + std::to_string(N) + " interval " + std::to_string(i) +
                             " meets excluded level-" + std::to_string(level) + " interval " + std::to_string(k);
        return report;
      }
    }
  }
  const std::uint64_t allowed = max_intervals(N);
  if (forced.size() > allowed) {
    report.status = FeasibilityStatus::infeasible;
    report.certificate = "covering the selected intervals forces " + std::to_string(forced.size()) +
                         " order-" + std::to_string(N) + " intervals; C_" + std::to_string(N) +
                         " allows at most " + std::to_string(allowed);
    return report;
  }
  report.status = FeasibilityStatus::feasible;
  report.witness = union_of(N, forced);
  report.certificate = "minimal forced cover of " + std::to_string(forced.size()) + " interval(s) fits the budget of " +
                       std::to_string(allowed);
  return report;
}

}  // namespace paclab::order_class
