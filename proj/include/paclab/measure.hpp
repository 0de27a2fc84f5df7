#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "paclab/cantor.hpp"
#include "paclab/concept.hpp"
#include "paclab/error.hpp"
#include "paclab/interval_set.hpp"
#include "paclab/random.hpp"
#include "paclab/sontag.hpp"

namespace paclab {

inline constexpr double kMassTolerance = 1e-12;

struct Atom {
  double location = 0.0;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

class AtomicMeasure {
 public:
  AtomicMeasure() = default;

  // Atoms are sorted by location; locations must be distinct, masses positive
  // and summing to one.
  explicit AtomicMeasure(std::vector<Atom> atoms) {
    require(!atoms.empty(), "AtomicMeasure: at least one atom required");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    auto locations = std::make_shared<std::vector<double>>();
    locations->reserve(atoms.size());
    masses_.reserve(atoms.size());
    cumulative_.reserve(atoms.size());
    // Neumaier summation: hundreds of thousands of tiny masses drift otherwise.
    double running = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      require(std::isfinite(atoms[i].location), "AtomicMeasure: non-finite atom location");
      require(atoms[i].mass > 0.0, "AtomicMeasure: atom masses must be positive");
      require(i == 0 || atoms[i - 1].location < atoms[i].location,
              "AtomicMeasure: atom locations must be distinct");
      locations->push_back(atoms[i].location);
      masses_.push_back(atoms[i].mass);
      const double m = atoms[i].mass, t = running + m;
      carry += std::abs(running) >= std::abs(m) ? (running - t) + m : (m - t) + running;
      running = t;
      cumulative_.push_back(running + carry);
    }
    require(std::abs(running + carry - 1.0) <= kMassTolerance, "AtomicMeasure: masses must sum to 1");
    locations_ = std::move(locations);
  }

  std::size_t size() const { return masses_.size(); }
  double location(std::size_t i) const { return (*locations_)[i]; }
  double mass(std::size_t i) const { return masses_[i]; }
  Atom atom(std::size_t i) const { return {location(i), mass(i)}; }
  const std::vector<double>& locations() const { return *locations_; }
  const std::shared_ptr<const std::vector<double>>& shared_locations() const { return locations_; }
  const std::vector<double>& masses() const { return masses_; }

  std::optional<std::size_t> index_of(double x) const {
    const auto& loc = *locations_;
    auto it = std::lower_bound(loc.begin(), loc.end(), x);
    if (it == loc.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - loc.begin());
  }

  std::size_t draw_index(Rng& rng) const {
    const double u = uniform01(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

  friend bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
    return a.masses_ == b.masses_ &&
           (a.locations_ == b.locations_ || (a.locations_ && b.locations_ && *a.locations_ == *b.locations_));
  }

 private:
  std::shared_ptr<const std::vector<double>> locations_ = std::make_shared<std::vector<double>>();
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

struct UniformMeasure {
  double a = 0.0;
  double b = 1.0;

  void validate() const { require(b - a > 0.0, "UniformMeasure: need a < b"); }
  friend bool operator==(const UniformMeasure&, const UniformMeasure&) = default;
};

// Haar measure on the middle-thirds Cantor set; `depth` ternary digits are
// drawn per sample.
struct CantorMeasure {
  int depth = cantor::kMaxDigits;

  void validate() const { require(depth >= 1 && depth <= cantor::kMaxDigits, "CantorMeasure: depth in [1, 40]"); }
  friend bool operator==(const CantorMeasure&, const CantorMeasure&) = default;
};

class Measure;

// base (x) uniform fiber. Concepts act on the first coordinate only
// (C becomes C x fiber).
struct ProductMeasure {
  std::shared_ptr<const Measure> base;
  UniformMeasure fiber;
};

// One cell of a partition of the base domain, sent to the point `target`.
struct PartitionCell {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = false;
  double target = 0.0;

  Interval interval() const { return {lo, hi, lo_closed, hi_closed}; }
  friend bool operator==(const PartitionCell&, const PartitionCell&) = default;
};

// Image of `base` under a map that sends each cell of a partition to a
// single point.
struct PushforwardMeasure {
  std::shared_ptr<const Measure> base;
  std::vector<PartitionCell> cells;
};

using MeasureKind = std::variant<AtomicMeasure, UniformMeasure, CantorMeasure, ProductMeasure, PushforwardMeasure>;

// Immutable measure value; cheap to copy (nested measures are shared).
class Measure {
 public:
  Measure(AtomicMeasure m) : kind_(std::move(m)) {}
  Measure(UniformMeasure m) : kind_(m) { m.validate(); }
  Measure(CantorMeasure m) : kind_(m) { m.validate(); }
  Measure(ProductMeasure m) : kind_(std::move(m)) {
    require(std::get<ProductMeasure>(kind_).base != nullptr, "ProductMeasure: missing base");
    std::get<ProductMeasure>(kind_).fiber.validate();
  }
  Measure(PushforwardMeasure m) : kind_(std::move(m)) {
    const auto& p = std::get<PushforwardMeasure>(kind_);
    require(p.base != nullptr, "PushforwardMeasure: missing base");
    require(!p.cells.empty(), "PushforwardMeasure: empty partition");
    for (const auto& c : p.cells) require(!c.interval().empty(), "PushforwardMeasure: empty partition cell");
  }

  const MeasureKind& kind() const { return kind_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

 private:
  MeasureKind kind_;
};

inline std::shared_ptr<const Measure> share(Measure m) { return std::make_shared<const Measure>(std::move(m)); }

inline Measure product_lift(Measure base, UniformMeasure fiber = {0.0, 1.0}) {
  return Measure(ProductMeasure{share(std::move(base)), fiber});
}

// ---------------------------------------------------------------------------
// Sampling.

namespace detail {

inline double map_point(const PushforwardMeasure& p, double x) {
  for (const auto& c : p.cells) {
    if (c.interval().contains(x)) return c.target;
  }
  throw InvariantViolation("pushforward map is not defined at sampled point " + std::to_string(x));
}

inline double draw(const Measure& m, Rng& rng) {
  return std::visit(
      [&rng](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          return k.location(k.draw_index(rng));
        } else if constexpr (std::is_same_v<T, UniformMeasure>) {
          return k.a + (k.b - k.a) * uniform01(rng);
        } else if constexpr (std::is_same_v<T, CantorMeasure>) {
          // Digits in {0, 2}, accumulated exactly as an integer over 3^depth.
          std::uint64_t numerator = 0;
          for (int i = 0; i < k.depth; ++i) numerator = 3 * numerator + (coin(rng) ? 2 : 0);
          return static_cast<double>(numerator) / static_cast<double>(cantor::pow3(k.depth));
        } else if constexpr (std::is_same_v<T, ProductMeasure>) {
          const double first = draw(*k.base, rng);
          (void)uniform01(rng);
          return first;
        } else {
          return map_point(k, draw(*k.base, rng));
        }
      },
      m.kind());
}

}  // namespace detail

// n i.i.d. draws; the same seed always yields the same sequence. Product
// measures yield their first coordinate (see sample_pairs).
inline std::vector<double> sample(const Measure& m, std::uint64_t seed, std::size_t n) {
  Rng rng = make_rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(detail::draw(m, rng));
  return out;
}

inline std::vector<double> sample(const Measure& m, Rng& rng, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(detail::draw(m, rng));
  return out;
}

inline std::vector<std::pair<double, double>> sample_pairs(const ProductMeasure& m, std::uint64_t seed,
                                                           std::size_t n) {
  Rng rng = make_rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double first = detail::draw(*m.base, rng);
    const double second = m.fiber.a + (m.fiber.b - m.fiber.a) * uniform01(rng);
    out.emplace_back(first, second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expectations.

enum class IntegrationMethod { exact, grid, monte_carlo };

inline const char* to_string(IntegrationMethod m) {
  switch (m) {
    case IntegrationMethod::exact: return "exact";
    case IntegrationMethod::grid: return "grid";
    case IntegrationMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct IntegrationOptions {
  std::size_t max_arcs = 1'000'000;  // beyond this, arc decomposition falls back
  std::size_t grid_cells = 1'000'000;
  std::size_t min_grid_cells = 10'000;
  std::size_t monte_carlo_samples = 1'000'000;
  std::uint64_t monte_carlo_seed = 0x5eedULL;
};

struct Integral {
  double value = 0.0;
  IntegrationMethod method = IntegrationMethod::exact;
  std::vector<std::string> warnings;
};

// Measure of a single interval. Closedness matters only for atomic parts.
inline double interval_mass(const Measure& m, const Interval& iv) {
  if (iv.empty()) return 0.0;
  return std::visit(
      [&iv](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          double sum = 0.0;
          for (std::size_t i = 0; i < k.size(); ++i) {
            if (iv.contains(k.location(i))) sum += k.mass(i);
          }
          return sum;
        } else if constexpr (std::is_same_v<T, UniformMeasure>) {
          const double lo = std::max(iv.lo, k.a);
          const double hi = std::min(iv.hi, k.b);
          return hi > lo ? (hi - lo) / (k.b - k.a) : 0.0;
        } else if constexpr (std::is_same_v<T, CantorMeasure>) {
          return std::max(0.0, cantor::cantor_function(iv.hi) - cantor::cantor_function(iv.lo));
        } else if constexpr (std::is_same_v<T, ProductMeasure>) {
          return interval_mass(*k.base, iv);
        } else {
          double sum = 0.0;
          for (const auto& c : k.cells) {
            if (iv.contains(c.target)) sum += interval_mass(*k.base, c.interval());
          }
          return sum;
        }
      },
      m.kind());
}

inline double set_mass(const Measure& m, const IntervalSet& s) {
  double sum = 0.0;
  for (const auto& p : s.pieces()) sum += interval_mass(m, p);
  return sum;
}


}  // namespace paclab
