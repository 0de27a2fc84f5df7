#pragma once

// Minimal-empirical-risk learning over atomic instances, Monte Carlo
// estimation of the sample complexity n(eps, delta), and the uniform
// deviation sup_C |E_mu(C) - E_mu_n(C)| in census and adversarial form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "paclab/concept.hpp"
#include "paclab/construction.hpp"
#include "paclab/error.hpp"
#include "paclab/expectation.hpp"
#include "paclab/measure.hpp"
#include "paclab/order_class.hpp"
#include "paclab/parallel.hpp"
#include "paclab/random.hpp"
#include "paclab/sontag.hpp"

namespace paclab::learner {

struct LabeledSample {
  std::vector<double> points;
  std::vector<int> labels;
};

inline LabeledSample label_sample(std::vector<double> points, const Concept& target) {
  LabeledSample s;
  s.labels.reserve(points.size());
  for (double x : points) s.labels.push_back(member(target, x));
  s.points = std::move(points);
  return s;
}

// Per-atom majority vote (ties and unseen atoms -> 0) over atom indices.
// Over a family shattering the universe this is a minimal-empirical-risk
// hypothesis.
inline std::vector<std::uint8_t> erm_bits(std::span<const std::size_t> atom_of_point, std::span<const int> labels,
                                          std::size_t universe_size) {
  std::vector<std::int64_t> vote(universe_size, 0);
  for (std::size_t i = 0; i < atom_of_point.size(); ++i) vote[atom_of_point[i]] += labels[i] ? 1 : -1;
  std::vector<std::uint8_t> bits(universe_size);
  for (std::size_t a = 0; a < universe_size; ++a) bits[a] = vote[a] > 0 ? 1 : 0;
  return bits;
}

inline Concept erm_learn(const LabeledSample& sample, const AtomicMeasure& universe) {
  require(sample.points.size() == sample.labels.size(), "erm_learn: points/labels length mismatch");
  std::vector<std::size_t> atom_of_point;
  atom_of_point.reserve(sample.points.size());
  for (double x : sample.points) {
    const auto idx = universe.index_of(x);
    if (!idx) throw std::invalid_argument("erm_learn: sample point " + std::to_string(x) + " is not an atom");
    atom_of_point.push_back(*idx);
  }
  return Concept::atom_labels(universe.shared_locations(), erm_bits(atom_of_point, sample.labels, universe.size()), 0);
}

inline double empirical_risk(const Concept& h, const LabeledSample& sample) {
  if (sample.points.empty()) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < sample.points.size(); ++i) wrong += member(h, sample.points[i]) != sample.labels[i];
  return static_cast<double>(wrong) / static_cast<double>(sample.points.size());
}

// mu(h symmetric-difference target), exactly.
inline double true_error(const Concept& h, const Concept& target, const AtomicMeasure& mu) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (member(h, mu.location(i)) != member(target, mu.location(i))) sum += mu.mass(i);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Sample-complexity estimation.

// An atomic universe whose `free` atoms are labelled by the target; the
// remaining atoms are fixed to 0.
struct LearningProblem {
  AtomicMeasure universe;
  std::vector<std::uint8_t> free;

  static LearningProblem all_free(AtomicMeasure mu) {
    std::vector<std::uint8_t> free(mu.size(), 1);
    return {std::move(mu), std::move(free)};
  }

  // Level atoms are free, the residual atom is fixed.
  static LearningProblem from_instance(const construction::ConstructedInstance& inst) {
    std::vector<std::uint8_t> free(inst.measure.size(), 0);
    for (std::size_t i = 0; i < inst.atoms_through(inst.K()); ++i) free[i] = 1;
    return {inst.measure, std::move(free)};
  }
};

struct Probe {
  std::uint64_t n = 0;
  std::size_t failures = 0;
};

struct ComplexityEstimate {
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t n_hat = 0;
  std::size_t trials = 0;
  double failure_rate_at_n_hat = 0.0;
  std::pair<double, double> confidence_interval{0.0, 0.0};  // Wilson 95%
  std::uint64_t seed = 0;
  bool converged = false;
  std::uint64_t n_cap = 0;
  std::vector<Probe> probes;  // in probing order
};

struct EstimatorOptions {
  std::uint64_t n_cap = 10'000'000;
  unsigned threads = 1;
  std::size_t min_trials = 100;
};

inline std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

namespace detail {

// Episode `t` at sample size n: a uniformly random target labeling of the
// free atoms, n i.i.d. draws, per-atom ERM, exact error. Draw streams are
// seeded per episode and independent of n, so a smaller sample is a prefix
// of a larger one and the error is non-increasing in n.
inline double episode_error(const LearningProblem& p, std::uint64_t seed, std::size_t t, std::uint64_t n) {
  const auto& mu = p.universe;
  Rng target_rng = make_rng(seed, 2 * static_cast<std::uint64_t>(t));
  Rng draw_rng = make_rng(seed, 2 * static_cast<std::uint64_t>(t) + 1);
  std::vector<std::uint8_t> target(mu.size(), 0);
  for (std::size_t a = 0; a < mu.size(); ++a) target[a] = p.free[a] ? static_cast<std::uint8_t>(coin(target_rng)) : 0;
  std::vector<std::size_t> drawn(static_cast<std::size_t>(n));
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    drawn[i] = mu.draw_index(draw_rng);
    labels[i] = target[drawn[i]];
  }
  const auto h = erm_bits(drawn, labels, mu.size());
  for (std::uint64_t i = 0; i < n; ++i) {
    ensure(h[drawn[i]] == labels[i], "erm: non-zero empirical risk on a consistent sample");
  }
  double error = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (h[a] != target[a]) error += mu.mass(a);
  }
  return error;
}

}  // namespace detail

// Smallest n whose failure frequency P(error > eps) over `trials` episodes is
// at most delta, found by doubling then bisection.
inline ComplexityEstimate estimate_sample_complexity(const LearningProblem& problem, double eps, double delta,
                                                     std::size_t trials, std::uint64_t seed,
                                                     const EstimatorOptions& opt = {}) {
  require(eps > 0.0, "estimate_sample_complexity: eps must be positive");
  require(delta > 0.0 && delta < 1.0, "estimate_sample_complexity: delta must lie in (0, 1)");
  require(trials >= opt.min_trials, "estimate_sample_complexity: too few trials");
  require(problem.free.size() == problem.universe.size(), "estimate_sample_complexity: free mask size mismatch");
  ComplexityEstimate est;
  est.eps = eps;
  est.delta = delta;
  est.trials = trials;
  est.seed = seed;
  est.n_cap = opt.n_cap;

  std::vector<std::uint8_t> failed(trials);
  auto failures_at = [&](std::uint64_t n) {
    parallel_for(trials, opt.threads, [&](std::size_t t) {
      failed[t] = detail::episode_error(problem, seed, t, n) > eps + 1e-12 ? 1 : 0;
    });
    std::size_t count = 0;
    for (auto f : failed) count += f;
    est.probes.push_back({n, count});
    return count;
  };
  auto passes = [&](std::size_t failures) { return static_cast<double>(failures) <= delta * static_cast<double>(trials); };

  std::uint64_t lo = 0;  // largest n known to fail
  std::uint64_t hi = 0;
  std::size_t hi_failures = failures_at(0);
  if (!passes(hi_failures)) {
    std::uint64_t n = 1;
    while (true) {
      if (n > opt.n_cap) {
        est.converged = false;
        est.n_hat = opt.n_cap;
        return est;
      }
      const auto f = failures_at(n);
      if (passes(f)) {
        hi = n;
        hi_failures = f;
        break;
      }
      lo = n;
      n *= 2;
    }
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      const auto f = failures_at(mid);
      if (passes(f)) {
        hi = mid;
        hi_failures = f;
      } else {
        lo = mid;
      }
    }
  }
  est.converged = true;
  est.n_hat = hi;
  est.failure_rate_at_n_hat = static_cast<double>(hi_failures) / static_cast<double>(trials);
  est.confidence_interval = wilson_interval(hi_failures, trials);
  return est;
}

// ---------------------------------------------------------------------------
// Uniform deviation between true and empirical means.

struct DeviationStats {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::vector<double> deviations;  // per counted trial
  std::size_t flagged = 0;         // adversarial trials with no witness
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

namespace detail {

inline DeviationStats summarize(std::size_t n, std::size_t trials, const std::vector<std::optional<double>>& per_trial) {
  DeviationStats s;
  s.n = n;
  s.trials = trials;
  for (const auto& d : per_trial) {
    if (d) {
      s.deviations.push_back(*d);
    } else {
      ++s.flagged;
    }
  }
  if (s.deviations.empty()) return s;
  double sum = 0.0;
  for (double d : s.deviations) {
    sum += d;
    s.max = std::max(s.max, d);
  }
  s.mean = sum / static_cast<double>(s.deviations.size());
  std::vector<double> sorted = s.deviations;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  s.median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  return s;
}

}  // namespace detail

// Census mode: max over a finite class of |E_mu(C) - E_mu_n(C)|, per trial.
inline DeviationStats gc_deviation_census(const std::vector<Concept>& family, const Measure& mu, std::size_t n,
                                          std::size_t trials, std::uint64_t seed, unsigned threads = 1,
                                          const IntegrationOptions& integration = {}) {
  require(!family.empty(), "gc_deviation: empty class");
  require(n >= 1, "gc_deviation: n must be positive");
  std::vector<double> truth;
  truth.reserve(family.size());
  for (const auto& c : family) truth.push_back(expect_indicator(mu, c, integration));

  const auto* atomic = mu.as<AtomicMeasure>();
  std::vector<std::uint8_t> table;  // membership per (concept, atom)
  if (atomic != nullptr) {
    table.resize(family.size() * atomic->size());
    for (std::size_t c = 0; c < family.size(); ++c) {
      for (std::size_t a = 0; a < atomic->size(); ++a) {
        table[c * atomic->size() + a] = static_cast<std::uint8_t>(member(family[c], atomic->location(a)));
      }
    }
  }
  std::vector<std::optional<double>> per_trial(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = make_rng(seed, t);
    double worst = 0.0;
    if (atomic != nullptr) {
      std::vector<std::size_t> hits(atomic->size(), 0);
      for (std::size_t i = 0; i < n; ++i) ++hits[atomic->draw_index(rng)];
      for (std::size_t c = 0; c < family.size(); ++c) {
        std::size_t inside = 0;
        for (std::size_t a = 0; a < atomic->size(); ++a) inside += table[c * atomic->size() + a] ? hits[a] : 0;
        worst = std::max(worst, std::abs(truth[c] - static_cast<double>(inside) / static_cast<double>(n)));
      }
    } else {
      const auto points = sample(mu, rng, n);
      for (std::size_t c = 0; c < family.size(); ++c) {
        std::size_t inside = 0;
        for (double x : points) inside += static_cast<std::size_t>(member(family[c], x));
        worst = std::max(worst, std::abs(truth[c] - static_cast<double>(inside) / static_cast<double>(n)));
      }
    }
    per_trial[t] = worst;
  });
  return detail::summarize(n, trials, per_trial);
}

enum class AdversaryFamily { sontag, order_intervals };

struct AdversaryOptions {
  AdversaryFamily family = AdversaryFamily::sontag;
  sontag::SearchOptions search{100.0, 1e9, sontag::kDefaultAlpha, 100'000'000};
  IntegrationOptions integration;
};

// Adversarial mode: per trial, fit a class member to the all-ones labeling of
// the drawn sample (empirical mean 1) and report |1 - E_mu(C)|. Trials
// without a witness are flagged and excluded.
inline DeviationStats gc_deviation_adversarial(const Measure& mu, std::size_t n, std::size_t trials, std::uint64_t seed,
                                               const AdversaryOptions& opt = {}, unsigned threads = 1) {
  require(n >= 1, "gc_deviation: n must be positive");
  std::vector<std::optional<double>> per_trial(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = make_rng(seed, t);
    const auto points = sample(mu, rng, n);
    std::optional<Concept> fitted;
    if (opt.family == AdversaryFamily::sontag) {
      const std::vector<int> ones(points.size(), 1);
      const auto r = sontag::shatter_search(points, ones, opt.search);
      if (r.status == sontag::SearchStatus::found) fitted = Concept::sontag(*r.witness, opt.search.alpha);
    } else {
      std::vector<double> distinct = points;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      fitted = order_class::isolate_points(std::move(distinct)).hypothesis;
    }
    if (!fitted) return;
    for (double x : points) ensure(member(*fitted, x) == 1, "gc_deviation: fitted concept misses a sample point");
    per_trial[t] = std::abs(1.0 - expect_indicator(mu, *fitted, opt.integration));
  });
  return detail::summarize(n, trials, per_trial);
}

}  // namespace paclab::learner
