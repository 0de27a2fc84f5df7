#pragma once

// Indicator expectations E_mu[1_C] and the L1(mu) distance between concepts,
// mu(C1 symmetric-difference C2). Exact on atomic measures; exact by interval
// arithmetic on uniform and Cantor measures whenever the concepts are finite
// unions of intervals there; grid or Monte Carlo integration otherwise, with
// the method reported.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "paclab/cantor.hpp"
#include "paclab/concept.hpp"
#include "paclab/measure.hpp"
#include "paclab/sontag.hpp"

namespace paclab {

// {x in [lo, hi] : x in c} as an interval set. Atom labelings reduce to their
// default bit, since atoms are null sets for the non-atomic measures that use
// this. Returns nullopt when a Sontag concept has more than max_arcs arcs on
// the domain.
inline std::optional<IntervalSet> concept_region(const Concept& c, double lo, double hi,
                                                 std::size_t max_arcs) {
  return std::visit(
      [&](const auto& d) -> std::optional<IntervalSet> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SontagConcept>) {
          return sontag::positive_arcs(d.w, lo, hi, max_arcs);
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          return IntervalSet(d.intervals).clip(lo, hi);
        } else if constexpr (std::is_same_v<T, AtomLabeling>) {
          return d.default_bit ? IntervalSet::single(Interval::closed(lo, hi)) : IntervalSet{};
        } else {
          std::vector<Interval> pieces;
          pieces.reserve(d.thirds.size());
          for (const auto& t : d.thirds) pieces.push_back(middle_third_interval(t));
          return IntervalSet(std::move(pieces)).clip(lo, hi);
        }
      },
      c.descriptor());
}

namespace detail {

// Midpoint-rule integral of an indicator over a uniform measure.
template <typename Indicator>
Integral uniform_grid(const UniformMeasure& u, Indicator&& indicator, const IntegrationOptions& opt) {
  Integral out;
  out.method = IntegrationMethod::grid;
  const std::size_t cells = std::max<std::size_t>(1, opt.grid_cells);
  if (cells < opt.min_grid_cells) {
    out.warnings.push_back("grid integration with " + std::to_string(cells) + " cells is below the minimum of " +
                           std::to_string(opt.min_grid_cells));
  }
  const double h = (u.b - u.a) / static_cast<double>(cells);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    if (indicator(u.a + (static_cast<double>(i) + 0.5) * h)) ++hits;
  }
  out.value = static_cast<double>(hits) / static_cast<double>(cells);
  return out;
}

template <typename Indicator>
Integral monte_carlo(const Measure& m, Indicator&& indicator, const IntegrationOptions& opt) {
  Integral out;
  out.method = IntegrationMethod::monte_carlo;
  Rng rng = make_rng(opt.monte_carlo_seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < opt.monte_carlo_samples; ++i) {
    if (indicator(detail::draw(m, rng))) ++hits;
  }
  out.value = static_cast<double>(hits) / static_cast<double>(std::max<std::size_t>(1, opt.monte_carlo_samples));
  return out;
}

inline std::pair<double, double> support_of(const Measure& m) {
  if (const auto* u = m.as<UniformMeasure>()) return {u->a, u->b};
  return {0.0, 1.0};  // Cantor
}

}  // namespace detail

inline Integral integrate_indicator(const Measure& m, const Concept& c, const IntegrationOptions& opt = {}) {
  return std::visit(
      [&](const auto& k) -> Integral {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          double sum = 0.0;
          for (std::size_t i = 0; i < k.size(); ++i) {
            if (member(c, k.location(i))) sum += k.mass(i);
          }
          return {sum, IntegrationMethod::exact, {}};
        } else if constexpr (std::is_same_v<T, ProductMeasure>) {
          return integrate_indicator(*k.base, c, opt);
        } else if constexpr (std::is_same_v<T, PushforwardMeasure>) {
          double sum = 0.0;
          for (const auto& cell : k.cells) {
            if (member(c, cell.target)) sum += interval_mass(*k.base, cell.interval());
          }
          return {sum, IntegrationMethod::exact, {}};
        } else {
          if constexpr (std::is_same_v<T, UniformMeasure>) {
            if (const auto* s = c.as<SontagConcept>()) {
              return {sontag::positive_arc_measure(k.a, k.b, s->w) / (k.b - k.a), IntegrationMethod::exact, {}};
            }
          }
          const auto [lo, hi] = detail::support_of(m);
          if (auto region = concept_region(c, lo, hi, opt.max_arcs)) {
            return {set_mass(m, *region), IntegrationMethod::exact, {}};
          }
          auto indicator = [&c](double x) { return member(c, x) != 0; };
          if constexpr (std::is_same_v<T, UniformMeasure>) {
            return detail::uniform_grid(k, indicator, opt);
          } else {
            return detail::monte_carlo(m, indicator, opt);
          }
        }
      },
      m.kind());
}

inline double expect_indicator(const Measure& m, const Concept& c, const IntegrationOptions& opt = {}) {
  return integrate_indicator(m, c, opt).value;
}

// L1(mu) distance mu(c1 symmetric-difference c2), with method and warnings.
inline Integral l1_distance_detailed(const Concept& c1, const Concept& c2, const Measure& m,
                                     const IntegrationOptions& opt = {}) {
  return std::visit(
      [&](const auto& k) -> Integral {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          double sum = 0.0;
          for (std::size_t i = 0; i < k.size(); ++i) {
            const double x = k.location(i);
            if (member(c1, x) != member(c2, x)) sum += k.mass(i);
          }
          return {sum, IntegrationMethod::exact, {}};
        } else if constexpr (std::is_same_v<T, ProductMeasure>) {
          return l1_distance_detailed(c1, c2, *k.base, opt);
        } else if constexpr (std::is_same_v<T, PushforwardMeasure>) {
          double sum = 0.0;
          for (const auto& cell : k.cells) {
            if (member(c1, cell.target) != member(c2, cell.target)) sum += interval_mass(*k.base, cell.interval());
          }
          return {sum, IntegrationMethod::exact, {}};
        } else {
          if (c1 == c2) return {0.0, IntegrationMethod::exact, {}};
          const auto [lo, hi] = detail::support_of(m);
          auto r1 = concept_region(c1, lo, hi, opt.max_arcs);
          auto r2 = r1 ? concept_region(c2, lo, hi, opt.max_arcs) : std::nullopt;
          if (r1 && r2) {
            return {set_mass(m, symmetric_difference(*r1, *r2, lo, hi)), IntegrationMethod::exact, {}};
          }
          auto differs = [&](double x) { return member(c1, x) != member(c2, x); };
          if constexpr (std::is_same_v<T, UniformMeasure>) {
            return detail::uniform_grid(k, differs, opt);
          } else {
            return detail::monte_carlo(m, differs, opt);
          }
        }
      },
      m.kind());
}

inline double l1_distance(const Concept& c1, const Concept& c2, const Measure& m,
                          const IntegrationOptions& opt = {}) {
  return l1_distance_detailed(c1, c2, m, opt).value;
}

// ---------------------------------------------------------------------------
// Pushforward helpers.

inline Measure pushforward(const Measure& base, std::vector<PartitionCell> cells) {
  return Measure(PushforwardMeasure{share(base), std::move(cells)});
}

// The pushforward written out as an atomic measure on the cell targets.
inline AtomicMeasure as_atomic(const PushforwardMeasure& p) {
  std::map<double, double> mass_at;
  for (const auto& cell : p.cells) mass_at[cell.target] += interval_mass(*p.base, cell.interval());
  std::vector<Atom> atoms;
  for (const auto& [loc, mass] : mass_at) {
    if (mass > 0.0) atoms.push_back({loc, mass});
  }
  return AtomicMeasure(std::move(atoms));
}

}  // namespace paclab
