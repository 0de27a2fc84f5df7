#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace paclab {

// One interval of the real line with explicit endpoint closedness. Endpoint
// comparisons are exact; nothing here rounds.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static constexpr Interval closed(double a, double b) { return {a, b, true, true}; }
  static constexpr Interval open(double a, double b) { return {a, b, false, false}; }
  static constexpr Interval closed_open(double a, double b) { return {a, b, true, false}; }

  constexpr bool empty() const {
    return lo > hi || (lo == hi && !(lo_closed && hi_closed));
  }
  constexpr bool contains(double x) const {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
  }
  constexpr double length() const { return empty() ? 0.0 : hi - lo; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

// A finite union of intervals kept sorted, pairwise disjoint and non-touching
// (two pieces sharing an endpoint that belongs to either are merged).
class IntervalSet {
 public:
  IntervalSet() = default;

  explicit IntervalSet(std::vector<Interval> pieces) : pieces_(std::move(pieces)) { normalize(); }

  static IntervalSet single(Interval piece) { return IntervalSet(std::vector<Interval>{piece}); }

  // Caller guarantees the pieces are already sorted, disjoint and
  // non-touching; skips normalization.
  static IntervalSet from_sorted(std::vector<Interval> pieces) {
    IntervalSet out;
    out.pieces_ = std::move(pieces);
    return out;
  }

  std::span<const Interval> pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  bool empty() const { return pieces_.empty(); }

  bool contains(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Interval& p) { return v < p.lo; });
    if (it != pieces_.begin() && std::prev(it)->contains(x)) return true;
    return it != pieces_.end() && it->contains(x);
  }

  double total_length() const {
    double sum = 0.0;
    for (const auto& p : pieces_) sum += p.length();
    return sum;
  }

  IntervalSet clip(double lo, double hi) const {
    return intersect(*this, single(Interval::closed(lo, hi)));
  }

  // Complement relative to the closed domain [lo, hi].
  IntervalSet complement(double lo, double hi) const {
    const IntervalSet inside = clip(lo, hi);
    std::vector<Interval> gaps;
    double cursor = lo;
    bool cursor_closed = true;
    for (const auto& p : inside.pieces_) {
      Interval gap{cursor, p.lo, cursor_closed, !p.lo_closed};
      if (!gap.empty()) gaps.push_back(gap);
      cursor = p.hi;
      cursor_closed = !p.hi_closed;
    }
    Interval tail{cursor, hi, cursor_closed, true};
    if (!tail.empty()) gaps.push_back(tail);
    return from_sorted(std::move(gaps));
  }

  friend IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < a.pieces_.size() && j < b.pieces_.size()) {
      const Interval& p = a.pieces_[i];
      const Interval& q = b.pieces_[j];
      Interval r;
      if (p.lo > q.lo) {
        r.lo = p.lo, r.lo_closed = p.lo_closed;
      } else if (q.lo > p.lo) {
        r.lo = q.lo, r.lo_closed = q.lo_closed;
      } else {
        r.lo = p.lo, r.lo_closed = p.lo_closed && q.lo_closed;
      }
      if (p.hi < q.hi) {
        r.hi = p.hi, r.hi_closed = p.hi_closed;
      } else if (q.hi < p.hi) {
        r.hi = q.hi, r.hi_closed = q.hi_closed;
      } else {
        r.hi = p.hi, r.hi_closed = p.hi_closed && q.hi_closed;
      }
      if (!r.empty()) out.push_back(r);
      if (ends_before(p, q)) {
        ++i;
      } else {
        ++j;
      }
    }
    return from_sorted(std::move(out));
  }

  friend IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> all(a.pieces_.begin(), a.pieces_.end());
    all.insert(all.end(), b.pieces_.begin(), b.pieces_.end());
    return IntervalSet(std::move(all));
  }

  // Symmetric difference restricted to the closed domain [lo, hi].
  friend IntervalSet symmetric_difference(const IntervalSet& a, const IntervalSet& b, double lo,
                                          double hi) {
    return intersect(unite(a, b).clip(lo, hi), intersect(a, b).complement(lo, hi));
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  static bool ends_before(const Interval& p, const Interval& q) {
    if (p.hi != q.hi) return p.hi < q.hi;
    return !p.hi_closed && q.hi_closed;
  }

  void normalize() {
    std::erase_if(pieces_, [](const Interval& p) { return p.empty(); });
    std::sort(pieces_.begin(), pieces_.end(), [](const Interval& p, const Interval& q) {
      if (p.lo != q.lo) return p.lo < q.lo;
      return p.lo_closed && !q.lo_closed;
    });
    std::vector<Interval> merged;
    for (const auto& p : pieces_) {
      if (!merged.empty()) {
        Interval& last = merged.back();
        const bool joins = p.lo < last.hi || (p.lo == last.hi && (last.hi_closed || p.lo_closed));
        if (joins) {
          if (p.hi > last.hi) {
            last.hi = p.hi;
            last.hi_closed = p.hi_closed;
          } else if (p.hi == last.hi) {
            last.hi_closed = last.hi_closed || p.hi_closed;
          }
          continue;
        }
      }
      merged.push_back(p);
    }
    pieces_ = std::move(merged);
  }

  std::vector<Interval> pieces_;
};

}  // namespace paclab
