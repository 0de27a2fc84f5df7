#include <gtest/gtest.h>

#include <random>

#include "paclab/learner.hpp"

using namespace paclab;
namespace ln = paclab::learner;
namespace cn = paclab::construction;

namespace {

AtomicMeasure uniform_atoms(std::size_t n) {
  std::vector<Atom> atoms;
  double rest = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = i + 1 == n ? rest : 1.0 / n;
    rest -= m;
    atoms.push_back({static_cast<double>(i), m});
  }
  return AtomicMeasure(atoms);
}

}  // namespace

TEST(Erm, Examples) {
  const AtomicMeasure mu({{1, 0.5}, {2, 0.5}});
  const auto empty = ln::erm_learn({}, mu);
  EXPECT_EQ(member(empty, 1), 0);
  EXPECT_EQ(member(empty, 2), 0);

  const ln::LabeledSample s{{1, 1, 1, 2}, {1, 1, 1, 0}};
  const auto h = ln::erm_learn(s, mu);
  EXPECT_EQ(member(h, 1), 1);
  EXPECT_EQ(member(h, 2), 0);

  const ln::LabeledSample tie{{1, 1}, {1, 0}};
  EXPECT_EQ(member(ln::erm_learn(tie, mu), 1), 0);

  EXPECT_THROW(ln::erm_learn({{1.5}, {1}}, mu), std::invalid_argument);
}

TEST(Erm, ConsistentSamplesHaveZeroRiskAndBoundedError) {
  const AtomicMeasure mu({{1, 0.2}, {2, 0.16}, {3, 0.16}, {4, 0.16}, {5, 0.32}});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::uint8_t> bits(5);
    for (auto& b : bits) b = rng() & 1;
    const auto target = Concept::atom_labels(mu.shared_locations(), bits);
    const auto pts = sample(Measure(mu), 1000 + t, 200);
    const auto s = ln::label_sample(pts, target);
    const auto h = ln::erm_learn(s, mu);
    EXPECT_EQ(ln::empirical_risk(h, s), 0.0);
    double unseen = 0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      if (std::find(pts.begin(), pts.end(), mu.location(a)) == pts.end()) unseen += mu.mass(a);
    }
    EXPECT_LE(ln::true_error(h, target, mu), unseen + 1e-15);
  }
}

TEST(TrueError, Examples) {
  const auto mu = uniform_atoms(5);
  auto loc = mu.shared_locations();
  const auto ones = Concept::atom_labels(loc, {1, 1, 1, 1, 1});
  const auto zeros = Concept::atom_labels(loc, {0, 0, 0, 0, 0});
  EXPECT_EQ(ln::true_error(ones, ones, mu), 0.0);
  EXPECT_NEAR(ln::true_error(zeros, ones, mu), 1.0, 1e-15);

  const auto inst = cn::build_measure(cn::ComplexitySchedule::standard(2, cn::RateFunction::poly(1.0)));
  std::vector<std::uint8_t> bits(inst.measure.size(), 0);
  const auto base = Concept::atom_labels(inst.measure.shared_locations(), bits);
  bits[7] = 1;  // a level-2 atom
  const auto flipped = Concept::atom_labels(inst.measure.shared_locations(), bits);
  EXPECT_NEAR(ln::true_error(base, flipped, inst.measure), 0.008, 1e-15);
}

TEST(TrueError, MatchesBruteForce) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 1000; ++t) {
    const auto mu = uniform_atoms(1 + rng() % 20);
    std::vector<std::uint8_t> bits(mu.size());
    for (auto& b : bits) b = rng() & 1;
    const auto h = Concept::atom_labels(mu.shared_locations(), bits);
    const auto target = Concept::intervals({Interval::closed(u(rng) * 10, 10 + u(rng) * 10)});
    double brute = 0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      const auto* iv = target.as<IntervalUnion>();
      const int in = iv->intervals[0].lo <= mu.location(a) && mu.location(a) <= iv->intervals[0].hi;
      if (bits[a] != in) brute += mu.mass(a);
    }
    EXPECT_EQ(ln::true_error(h, target, mu), brute);
  }
}

TEST(Estimator, TrivialCases) {
  const auto single = ln::LearningProblem::all_free(AtomicMeasure({{0.5, 1.0}}));
  const auto e = ln::estimate_sample_complexity(single, 0.1, 0.1, 200, 7);
  EXPECT_TRUE(e.converged);
  EXPECT_EQ(e.n_hat, 1u);

  const auto five = ln::LearningProblem::all_free(uniform_atoms(5));
  const auto vacuous = ln::estimate_sample_complexity(five, 1.0, 0.1, 100, 7);
  EXPECT_EQ(vacuous.n_hat, 0u);

  EXPECT_THROW(ln::estimate_sample_complexity(five, 0.1, 0.1, 50, 7), std::invalid_argument);
}

TEST(Estimator, StoppingRuleAndInterval) {
  const auto p = ln::LearningProblem::all_free(uniform_atoms(20));
  const auto e = ln::estimate_sample_complexity(p, 0.1, 0.1, 300, 11);
  ASSERT_TRUE(e.converged);
  EXPECT_LE(e.failure_rate_at_n_hat, 0.1);
  for (const auto& probe : e.probes) {
    if (probe.n == e.n_hat - 1) EXPECT_GT(probe.failures, 30u);
    if (probe.n < e.n_hat) EXPECT_GT(double(probe.failures), 0.1 * 300);
  }
  EXPECT_LE(e.confidence_interval.first, e.failure_rate_at_n_hat);
  EXPECT_GE(e.confidence_interval.second, e.failure_rate_at_n_hat);
}

TEST(Estimator, DeterministicAcrossThreadCounts) {
  const auto p = ln::LearningProblem::all_free(uniform_atoms(30));
  ln::EstimatorOptions one, four;
  four.threads = 4;
  const auto a = ln::estimate_sample_complexity(p, 0.1, 0.1, 200, 5, one);
  const auto b = ln::estimate_sample_complexity(p, 0.1, 0.1, 200, 5, four);
  EXPECT_EQ(a.n_hat, b.n_hat);
  EXPECT_EQ(a.failure_rate_at_n_hat, b.failure_rate_at_n_hat);
}

TEST(Estimator, MonotoneInEps) {
  const auto inst = cn::build_measure(cn::ComplexitySchedule::standard(2, cn::RateFunction::poly(1.0)));
  const auto p = ln::LearningProblem::from_instance(inst);
  std::uint64_t previous = ~0ull;
  for (double eps : {0.02, 0.04, 0.08, 0.12, 0.2, 0.3, 0.5}) {
    const auto e = ln::estimate_sample_complexity(p, eps, 0.1, 200, 21);
    EXPECT_LE(e.n_hat, previous) << eps;
    previous = e.n_hat;
  }
}

TEST(Estimator, NonConvergenceReportsCap) {
  const auto p = ln::LearningProblem::all_free(uniform_atoms(200));
  ln::EstimatorOptions opt;
  opt.n_cap = 16;
  const auto e = ln::estimate_sample_complexity(p, 0.01, 0.1, 100, 1, opt);
  EXPECT_FALSE(e.converged);
  EXPECT_EQ(e.n_hat, 16u);
  EXPECT_FALSE(e.probes.empty());
}

TEST(Wilson, KnownValues) {
  const auto [lo, hi] = ln::wilson_interval(10, 100);
  EXPECT_NEAR(lo, 0.05522, 1e-4);
  EXPECT_NEAR(hi, 0.17436, 1e-4);
  const auto zero = ln::wilson_interval(0, 400);
  EXPECT_EQ(zero.first, 0.0);
  EXPECT_GT(zero.second, 0.0);
}

TEST(GcDeviation, SingleAtomIsZero) {
  const Measure mu(AtomicMeasure({{0.3, 1.0}}));
  const std::vector<Concept> fam{Concept::sontag(1), Concept::sontag(20), Concept::intervals({Interval::closed(0, 0.2)})};
  const auto s = ln::gc_deviation_census(fam, mu, 5, 20, 1);
  EXPECT_EQ(s.max, 0.0);
  ln::AdversaryOptions opt;
  opt.search.w_min = 0.0;
  const auto adv = ln::gc_deviation_adversarial(mu, 5, 20, 1, opt);
  EXPECT_EQ(adv.max, 0.0);
}

TEST(GcDeviation, CensusShrinksOnAtomicMeasure) {
  const Measure mu(uniform_atoms(10));
  std::vector<Concept> fam;
  for (int w = 1; w <= 40; ++w) fam.push_back(Concept::sontag(0.37 * w));
  const auto small = ln::gc_deviation_census(fam, mu, 20, 50, 3);
  const auto large = ln::gc_deviation_census(fam, mu, 10'000, 50, 3, 4);
  EXPECT_LE(large.max, 0.05);
  EXPECT_LT(large.mean, small.mean);
}

TEST(GcDeviation, AdversarialSontagUnderUniform) {
  const Measure mu(UniformMeasure{0, 2 * sontag::kPi});
  const auto s = ln::gc_deviation_adversarial(mu, 16, 100, 9, {}, 4);
  EXPECT_EQ(s.flagged, 0u);
  std::size_t big = 0;
  for (double d : s.deviations) big += d >= 0.4;
  EXPECT_GE(big, 90u);
}

TEST(GcDeviation, AdversarialOrderIntervals) {
  const Measure mu(UniformMeasure{0, 1});
  ln::AdversaryOptions opt;
  opt.family = ln::AdversaryFamily::order_intervals;
  const auto s = ln::gc_deviation_adversarial(mu, 50, 50, 10, opt);
  for (double d : s.deviations) EXPECT_GE(d, 0.98);
}
