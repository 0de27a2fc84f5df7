#pragma once

// Purely atomic input distributions with a prescribed sample-complexity
// rate. Given accuracies eps_1 = 1/5 > eps_2 > ... and a rate f, level k
// holds |F_k| = f_k - f_{k-1} atoms (f_k = f(1/eps_k)) sharing mass
// m_k = 5 (eps_k - eps_{k+1}). The masses telescope to 1 - 5 eps_{K+1};
// truncating after K levels parks that tail on one residual atom. Atoms sit
// at logarithms of successive primes, where the Sontag network shatters
// every finite union of levels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paclab/bounds.hpp"
#include "paclab/concept.hpp"
#include "paclab/error.hpp"
#include "paclab/measure.hpp"
#include "paclab/rational.hpp"
#include "paclab/sontag.hpp"

namespace paclab::construction {

// Non-decreasing rate function: coef * x^power, coef * base^x, or a
// piecewise-linear table of (x, f(x)) pairs.
struct RateFunction {
  enum class Kind { poly, exp, table };
  Kind kind = Kind::poly;
  double coef = 1.0;
  double power = 2.0;
  double base = 2.0;
  std::vector<std::pair<double, double>> table;

  static RateFunction poly(double power, double coef = 1.0) { return {Kind::poly, coef, power, 2.0, {}}; }
  static RateFunction exponential(double base, double coef = 1.0) { return {Kind::exp, coef, 1.0, base, {}}; }
  static RateFunction from_table(std::vector<std::pair<double, double>> t) {
    std::sort(t.begin(), t.end());
    return {Kind::table, 1.0, 1.0, 2.0, std::move(t)};
  }

  double operator()(double x) const {
    switch (kind) {
      case Kind::poly: return coef * std::pow(x, power);
      case Kind::exp: return coef * std::pow(base, x);
      case Kind::table: {
        require(!table.empty(), "rate table is empty");
        const double tol = 1e-9 * std::max(1.0, std::abs(x));
        require(x >= table.front().first - tol && x <= table.back().first + tol,
                "rate table does not cover x = " + std::to_string(x));
        for (std::size_t i = 0; i < table.size(); ++i) {
          if (std::abs(table[i].first - x) <= tol) return table[i].second;
        }
        auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(x, -1e308));
        const auto& [x1, y1] = *it;
        const auto& [x0, y0] = *std::prev(it);
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
      }
    }
    return 0.0;
  }
};

struct ComplexitySchedule {
  std::vector<Rational> eps;  // eps[0] = 1/5, strictly decreasing; needs K + 1 entries
  RateFunction f;
  int K = 1;
  // Declared constant in f(x) >= c x; unset means half of f(x)/x at x = 1/eps_1.
  std::optional<double> linear_c;

  // eps_k = 5^-k for k = 1..K+1 with f(x) = x^2.
  static ComplexitySchedule standard(int K = 2, RateFunction f = RateFunction::poly(2.0)) {
    ComplexitySchedule s;
    s.K = K;
    s.f = std::move(f);
    std::int64_t den = 1;
    for (int k = 1; k <= K + 1; ++k) {
      den *= 5;
      s.eps.emplace_back(1, den);
    }
    return s;
  }
};

// ceil with a relative tolerance, so that 625.0000000001 counts as 625.
inline std::uint64_t ceil_rate(double v) {
  require(std::isfinite(v) && v >= 0.0, "rate value must be finite and non-negative");
  require(v < 9e15, "rate value too large to count atoms");
  return static_cast<std::uint64_t>(std::ceil(v - 1e-9 * std::max(1.0, v)));
}

struct ScheduleCheck {
  std::vector<std::uint64_t> f_values;  // f_1..f_K, rounded up
  double linear_constant = 0.0;         // min f(x)/x over the grid on [1/eps_1, 1/eps_K]
};

// Validates monotonicity of eps and f, at-least-linear growth of f on a grid
// over [1, 1/eps_{K+1}], and returns the rounded rates.
inline ScheduleCheck validate(const ComplexitySchedule& s) {
  require(s.K >= 0, "schedule: K must be non-negative");
  require(s.eps.size() >= static_cast<std::size_t>(s.K) + 1, "schedule: need K + 1 accuracies");
  require(s.eps[0] == Rational(1, 5), "schedule: eps_1 must equal 1/5");
  for (std::size_t i = 0; i < s.eps.size(); ++i) {
    require(Rational(0) < s.eps[i], "schedule: accuracies must be positive");
    require(i == 0 || s.eps[i] < s.eps[i - 1], "schedule: accuracies must be strictly decreasing");
  }
  ScheduleCheck out;
  const double x0 = 1.0 / s.eps[0].to_double();
  const double x_max = 1.0 / s.eps[static_cast<std::size_t>(s.K)].to_double();
  std::vector<double> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(std::pow(x_max, i / 64.0));
  for (int k = 0; k <= s.K; ++k) grid.push_back(1.0 / s.eps[static_cast<std::size_t>(k)].to_double());
  std::sort(grid.begin(), grid.end());
  double previous = -1.0;
  out.linear_constant = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double fx = s.f(x);
    require(std::isfinite(fx), "schedule: rate is not finite at x = " + std::to_string(x));
    require(fx >= previous - 1e-12 * std::abs(previous), "schedule: rate must be non-decreasing");
    previous = fx;
    if (x >= x0 * (1.0 - 1e-12)) out.linear_constant = std::min(out.linear_constant, fx / x);
  }
  const double c = s.linear_c.value_or(0.5 * s.f(x0) / x0);
  require(c > 0.0, "schedule: linear growth constant must be positive");
  require(out.linear_constant >= c * (1.0 - 1e-12),
          "schedule: rate must grow at least linearly (f(x) >= " + std::to_string(c) + " x fails on the grid)");
  std::uint64_t last = 0;
  for (int k = 0; k < s.K; ++k) {
    const auto fk = ceil_rate(s.f(1.0 / s.eps[static_cast<std::size_t>(k)].to_double()));
    require(fk >= last, "schedule: rounded rates must be non-decreasing");
    out.f_values.push_back(fk);
    last = fk;
  }
  return out;
}

struct Level {
  std::vector<double> atoms;  // F_k
  Rational mass;              // m_k
  std::uint64_t f_value = 0;  // f_k
};

struct ConstructedInstance {
  ComplexitySchedule schedule;
  std::vector<Level> levels;
  Atom residual;
  Rational residual_mass;
  std::vector<std::string> warnings;
  AtomicMeasure measure;  // levels plus residual

  std::size_t K() const { return levels.size(); }
  double eps(std::size_t k) const { return schedule.eps[k - 1].to_double(); }  // 1-based
  std::uint64_t f(std::size_t k) const { return k == 0 ? 0 : levels[k - 1].f_value; }

  // Atoms of F_1 u ... u F_k, in location order (a prefix of the measure).
  std::size_t atoms_through(std::size_t k) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < k; ++i) n += levels[i].atoms.size();
    return n;
  }
};

inline constexpr std::uint64_t kDefaultMaxAtoms = 10'000'000;

inline ConstructedInstance build_measure(const ComplexitySchedule& schedule, std::uint64_t max_atoms = kDefaultMaxAtoms) {
  const ScheduleCheck check = validate(schedule);
  ConstructedInstance inst;
  inst.schedule = schedule;
  const auto K = static_cast<std::size_t>(schedule.K);
  const std::uint64_t total_atoms = (K == 0 ? 0 : check.f_values.back()) + 1;
  if (total_atoms > max_atoms) {
    throw BudgetExceeded("build_measure: " + std::to_string(total_atoms) + " atoms exceed the cap of " +
                         std::to_string(max_atoms));
  }
  const auto locations = sontag::rationally_independent_points(static_cast<std::size_t>(total_atoms));
  std::size_t next = 0;
  Rational parked(0);
  std::uint64_t previous_f = 0;
  for (std::size_t k = 0; k < K; ++k) {
    Level level;
    level.f_value = check.f_values[k];
    level.mass = Rational(5) * (schedule.eps[k] - schedule.eps[k + 1]);
    const std::uint64_t count = level.f_value - previous_f;
    previous_f = level.f_value;
    if (count == 0) {
      inst.warnings.push_back("level " + std::to_string(k + 1) + " is empty (f_k = f_{k-1}); its mass " +
                              level.mass.to_string() + " moves to the residual atom");
      parked = parked + level.mass;
    }
    for (std::uint64_t i = 0; i < count; ++i) level.atoms.push_back(locations[next++]);
    inst.levels.push_back(std::move(level));
  }
  inst.residual_mass = Rational(5) * schedule.eps[K] + parked;
  inst.residual = {locations[next], inst.residual_mass.to_double()};

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(total_atoms));
  Rational total = inst.residual_mass;
  for (const auto& level : inst.levels) {
    if (level.atoms.empty()) continue;
    total = total + level.mass;
    const double each = level.mass.to_double() / static_cast<double>(level.atoms.size());
    for (double loc : level.atoms) atoms.push_back({loc, each});
  }
  atoms.push_back(inst.residual);
  ensure(total == Rational(1), "build_measure: level masses do not sum to one");
  inst.measure = AtomicMeasure(std::move(atoms));
  return inst;
}

// ---------------------------------------------------------------------------

struct ProfileRow {
  std::size_t k = 0;
  double eps = 0.0;
  std::uint64_t f_value = 0;
  std::uint64_t lower_rate = 0;                   // ceil(0.0128 f_k)
  std::optional<std::uint64_t> lower_packing;     // ceil(lg M(2 eps_k)) on the level-k family
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;                        // bi_upper with a 2^{f_k}-element net
  double proof_line = 0.0;                        // (8 / eps^2)(f_k + log2(1/delta)), annotation only
};

struct ComplexityProfile {
  double delta = 0.1;
  std::vector<ProfileRow> rows;
};

// Packing over the 2^{f_k} labelings needs their full distance matrix.
inline constexpr std::uint64_t kProfilePackingLimit = 10;

// Labelings of F_1 u ... u F_k (all other atoms labelled 0); an eps_k-net
// for all atom labelings when eps_{k+1} <= eps_k / 5.
class ShatteringSubfamily {
 public:
  ShatteringSubfamily(const ConstructedInstance& inst, std::size_t k)
      : locations_(inst.measure.shared_locations()), free_(inst.atoms_through(k)) {
    require(k <= inst.K(), "shattering_subfamily: level out of range");
  }

  std::size_t free_atoms() const { return free_; }
  std::uint64_t log2_size() const { return free_; }

  // Member `index`: bit j of index labels atom j.
  Concept at(std::uint64_t index) const {
    require(free_ >= 64 || index < (std::uint64_t{1} << free_), "shattering_subfamily: index out of range");
    std::vector<std::uint8_t> bits(locations_->size(), 0);
    for (std::size_t j = 0; j < free_ && j < 64; ++j) bits[j] = static_cast<std::uint8_t>((index >> j) & 1U);
    return Concept::atom_labels(locations_, std::move(bits), 0);
  }

  // The member closest to `target` in L1(mu): agree on the free atoms.
  Concept nearest(const Concept& target) const {
    std::vector<std::uint8_t> bits(locations_->size(), 0);
    for (std::size_t j = 0; j < free_; ++j) bits[j] = static_cast<std::uint8_t>(member(target, (*locations_)[j]));
    return Concept::atom_labels(locations_, std::move(bits), 0);
  }

  std::vector<Concept> materialize() const {
    require(free_ <= 24, "shattering_subfamily: too many members to materialize");
    std::vector<Concept> out;
    out.reserve(std::size_t{1} << free_);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << free_); ++i) out.push_back(at(i));
    return out;
  }

 private:
  std::shared_ptr<const std::vector<double>> locations_;
  std::size_t free_;
};

inline ShatteringSubfamily shattering_subfamily(const ConstructedInstance& inst, std::size_t k) {
  return ShatteringSubfamily(inst, k);
}

inline ComplexityProfile theoretical_profile(const ConstructedInstance& inst, double delta, unsigned threads = 1) {
  require(delta > 0.0 && delta <= 1.0, "theoretical_profile: delta must lie in (0, 1]");
  ComplexityProfile profile;
  profile.delta = delta;
  for (std::size_t k = 1; k <= inst.K(); ++k) {
    ProfileRow row;
    row.k = k;
    row.eps = inst.eps(k);
    row.f_value = inst.f(k);
    row.lower_rate = bounds::detail::ceil_count(0.0128 * static_cast<double>(row.f_value));
    row.lower = row.lower_rate;
    if (row.f_value <= kProfilePackingLimit) {
      const bounds::FiniteFamily family{shattering_subfamily(inst, k).materialize(), inst.measure};
      row.lower_packing = bounds::bi_lower(row.eps, family, threads);
      row.lower = std::max(row.lower, *row.lower_packing);
    }
    row.upper = bounds::bi_upper_log2(row.eps, delta, static_cast<double>(row.f_value));
    row.proof_line = 8.0 / (row.eps * row.eps) * (static_cast<double>(row.f_value) - std::log2(delta));
    ensure(row.lower <= row.upper, "theoretical_profile: lower bound exceeds upper bound");
    profile.rows.push_back(row);
  }
  return profile;
}

// ---------------------------------------------------------------------------

struct SontagFamily {
  double w_max = 1e6;
  double alpha = sontag::kDefaultAlpha;

  Concept at(double w) const {
    require(w >= 0.0 && w <= w_max, "SontagFamily: weight outside [0, w_max]");
    return Concept::sontag(w, alpha);
  }
};

struct LevelCensus {
  std::size_t k = 0;  // level union F_1..F_k; 0 means the residual atom alone
  std::size_t points = 0;
  bool checked = false;
  sontag::CensusResult census;
};

struct SontagInstance {
  Measure measure;
  SontagFamily family;
  std::vector<LevelCensus> censuses;
};

// The instance measure paired with the Sontag weight family, with a
// shattering census of every level union small enough to enumerate.
inline SontagInstance sontag_instance(const ConstructedInstance& inst, const sontag::SearchOptions& search,
                                      std::size_t census_limit = 12, unsigned threads = 1) {
  require(census_limit <= 24, "sontag_instance: census limit above 24 points");
  SontagInstance out{Measure(inst.measure), SontagFamily{search.w_max, search.alpha}, {}};
  auto run = [&](std::size_t k, std::vector<double> points) {
    LevelCensus lc;
    lc.k = k;
    lc.points = points.size();
    if (points.size() <= census_limit) {
      lc.checked = true;
      lc.census = sontag::shatter_census(points, search, threads);
    }
    out.censuses.push_back(std::move(lc));
  };
  if (inst.K() == 0) {
    run(0, {inst.residual.location});
    return out;
  }
  for (std::size_t k = 1; k <= inst.K(); ++k) {
    const auto& loc = inst.measure.locations();
    run(k, std::vector<double>(loc.begin(), loc.begin() + static_cast<std::ptrdiff_t>(inst.atoms_through(k))));
  }
  return out;
}

}  // namespace paclab::construction
