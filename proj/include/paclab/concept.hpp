#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "paclab/cantor.hpp"
#include "paclab/error.hpp"
#include "paclab/interval_set.hpp"
#include "paclab/sontag.hpp"

namespace paclab {

// {x : cos(w x) >= 0}, the y = 1 region of the network with weight w.
struct SontagConcept {
  double w = 0.0;
  double alpha = sontag::kDefaultAlpha;

  friend bool operator==(const SontagConcept&, const SontagConcept&) = default;
};

// Finite union of closed intervals, sorted, with neighbours allowed to share
// an endpoint (unions of adjacent order-n intervals do).
struct IntervalUnion {
  std::vector<Interval> intervals;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;
};

// A labeling of the atoms of an atomic measure; points that are not atoms
// get `default_bit`.
struct AtomLabeling {
  std::shared_ptr<const std::vector<double>> locations;
  std::vector<std::uint8_t> bits;
  int default_bit = 0;

  friend bool operator==(const AtomLabeling& a, const AtomLabeling& b) {
    const bool same_atoms = a.locations == b.locations ||
                            (a.locations && b.locations && *a.locations == *b.locations);
    return same_atoms && a.bits == b.bits && a.default_bit == b.default_bit;
  }
};

// Open middle third removed from level interval `index` of stage `level`
// of the Cantor construction.
struct MiddleThird {
  int level = 0;
  std::uint64_t index = 0;

  friend auto operator<=>(const MiddleThird&, const MiddleThird&) = default;
};

inline constexpr int kMaxMiddleThirdLevel = 20;

struct MiddleThirdUnion {
  std::vector<MiddleThird> thirds;  // sorted, unique

  friend bool operator==(const MiddleThirdUnion&, const MiddleThirdUnion&) = default;
};

using ConceptDescriptor = std::variant<SontagConcept, IntervalUnion, AtomLabeling, MiddleThirdUnion>;

// A concept is a membership predicate on the real line; equality is
// structural.
class Concept {
 public:
  Concept() : descriptor_(IntervalUnion{}) {}

  static Concept sontag(double w, double alpha = sontag::kDefaultAlpha) {
    sontag::SontagParams{w, alpha}.validate();
    return Concept(SontagConcept{w, alpha});
  }

  static Concept intervals(std::vector<Interval> pieces) {
    for (auto& p : pieces) {
      require(p.lo <= p.hi, "IntervalUnion: interval with lo > hi");
      p.lo_closed = p.hi_closed = true;
    }
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      require(pieces[i - 1].hi <= pieces[i].lo, "IntervalUnion: intervals must be sorted and disjoint");
    }
    return Concept(IntervalUnion{std::move(pieces)});
  }

  static Concept atom_labels(std::shared_ptr<const std::vector<double>> locations,
                             std::vector<std::uint8_t> bits, int default_bit = 0) {
    require(locations != nullptr, "AtomLabeling: missing atom locations");
    require(bits.size() == locations->size(), "AtomLabeling: one bit per atom required");
    for (auto& b : bits) b = b ? 1 : 0;
    return Concept(AtomLabeling{std::move(locations), std::move(bits), default_bit ? 1 : 0});
  }

  static Concept middle_thirds(std::vector<MiddleThird> thirds) {
    for (const auto& t : thirds) {
      require(t.level >= 0 && t.level <= kMaxMiddleThirdLevel, "MiddleThirdUnion: level out of range");
      require(t.index < (std::uint64_t{1} << t.level), "MiddleThirdUnion: index out of range");
    }
    std::sort(thirds.begin(), thirds.end());
    thirds.erase(std::unique(thirds.begin(), thirds.end()), thirds.end());
    return Concept(MiddleThirdUnion{std::move(thirds)});
  }

  const ConceptDescriptor& descriptor() const { return descriptor_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&descriptor_);
  }

  friend bool operator==(const Concept&, const Concept&) = default;

 private:
  explicit Concept(ConceptDescriptor d) : descriptor_(std::move(d)) {}
  ConceptDescriptor descriptor_;
};

// Exact endpoints of a middle third: (3a + 1) / 3^(L+1) and (3a + 2) / 3^(L+1)
// where a / 3^L is the left end of its level interval.
inline Interval middle_third_interval(const MiddleThird& t) {
  const std::uint64_t a = cantor::level_numerator(t.level, t.index);
  const auto den = static_cast<double>(cantor::pow3(t.level + 1));
  return Interval::open(static_cast<double>(3 * a + 1) / den, static_cast<double>(3 * a + 2) / den);
}

// Membership by exact ternary digits of x.
inline bool in_middle_third(const MiddleThird& t, double x) {
  if (!(x > 0.0) || x >= 1.0) return false;
  const cantor::ExactTernary digits(x);
  const std::uint64_t a = cantor::level_numerator(t.level, t.index);
  // floor(x * 3^(L+1)) must be 3a + 1, and x must not be that grid point.
  return digits.scaled_floor(t.level + 1) == 3 * a + 1 && !digits.on_grid(t.level + 1);
}

namespace detail {

inline bool atom_member(const AtomLabeling& c, double x) {
  const auto& loc = *c.locations;
  auto it = std::lower_bound(loc.begin(), loc.end(), x);
  if (it != loc.end() && *it == x) return c.bits[static_cast<std::size_t>(it - loc.begin())] != 0;
  return c.default_bit != 0;
}

}  // namespace detail

inline int member(const Concept& c, double x) {
  return std::visit(
      [x](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SontagConcept>) {
          return sontag::net_output(x, {d.w, d.alpha});
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          for (const auto& p : d.intervals) {
            if (p.contains(x)) return 1;
          }
          return 0;
        } else if constexpr (std::is_same_v<T, AtomLabeling>) {
          return detail::atom_member(d, x) ? 1 : 0;
        } else {
          for (const auto& t : d.thirds) {
            if (in_middle_third(t, x)) return 1;
          }
          return 0;
        }
      },
      c.descriptor());
}

inline std::string kind_name(const Concept& c) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SontagConcept>) return "sontag";
        if constexpr (std::is_same_v<T, IntervalUnion>) return "intervals";
        if constexpr (std::is_same_v<T, AtomLabeling>) return "atom_labels";
        return "middle_thirds";
      },
      c.descriptor());
}

}  // namespace paclab
