#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "paclab/expectation.hpp"

using namespace paclab;

namespace {

AtomicMeasure random_atomic(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Atom> atoms;
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back({static_cast<double>(i) * 0.7 + 0.3 * u(rng), 0.05 + u(rng)});
    total += atoms.back().mass;
  }
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) rest -= (atoms[i].mass /= total);
  atoms.back().mass = rest;
  return AtomicMeasure(atoms);
}

}  // namespace

TEST(AtomicMeasure, Validation) {
  EXPECT_THROW(AtomicMeasure({{0, 0.5}, {1, 0.4}}), std::invalid_argument);
  EXPECT_THROW(AtomicMeasure({{0, 0.5}, {0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(AtomicMeasure({{0, 1.1}, {1, -0.1}}), std::invalid_argument);
  const AtomicMeasure m({{2, 0.2}, {1, 0.8}});
  EXPECT_EQ(m.location(0), 1.0);
  EXPECT_EQ(m.mass(0), 0.8);
  EXPECT_EQ(*m.index_of(2.0), 1u);
  EXPECT_FALSE(m.index_of(1.5));
}

TEST(Sample, Examples) {
  const Measure single(AtomicMeasure({{0.0, 1.0}}));
  EXPECT_EQ(sample(single, 123, 5), std::vector<double>(5, 0.0));
  EXPECT_TRUE(sample(single, 1, 0).empty());

  const Measure u(UniformMeasure{0, 2 * sontag::kPi});
  const auto xs = sample(u, 4, 100'000);
  EXPECT_NEAR(std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size(), sontag::kPi, 0.02);
}

TEST(Sample, Reproducible) {
  std::mt19937_64 rng(1);
  const Measure a(random_atomic(rng, 7));
  const Measure c(CantorMeasure{});
  const Measure u(UniformMeasure{-1, 3});
  for (const Measure* m : {&a, &c, &u}) {
    EXPECT_EQ(sample(*m, 77, 500), sample(*m, 77, 500));
    EXPECT_NE(sample(*m, 77, 500), sample(*m, 78, 500));
  }
}

TEST(Sample, AtomicFrequenciesFollowMasses) {
  const Measure m(AtomicMeasure({{1, 0.8}, {2, 0.15}, {3, 0.05}}));
  const auto xs = sample(m, 9, 200'000);
  EXPECT_NEAR(std::count(xs.begin(), xs.end(), 1.0) / 200'000.0, 0.8, 0.005);
  EXPECT_NEAR(std::count(xs.begin(), xs.end(), 3.0) / 200'000.0, 0.05, 0.003);
}

TEST(ExpectIndicator, Examples) {
  const Measure atomic(AtomicMeasure({{1, 0.8}, {2, 0.2}}));
  EXPECT_DOUBLE_EQ(expect_indicator(atomic, Concept::intervals({Interval::closed(-10, 1.5)})), 0.8);

  const Measure u(UniformMeasure{0, 2 * sontag::kPi});
  const auto r = integrate_indicator(u, Concept::sontag(2));
  EXPECT_EQ(r.method, IntegrationMethod::exact);
  EXPECT_NEAR(r.value, 0.5, 1e-12);

  const Measure cantor(CantorMeasure{});
  EXPECT_NEAR(expect_indicator(cantor, Concept::intervals({Interval::closed(0, 1.0 / 3)})), 0.5, 1e-12);
}

TEST(ExpectIndicator, AtomicMatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 1000; ++t) {
    const auto mu = random_atomic(rng, 1 + rng() % 15);
    const auto c = Concept::sontag(20 * u(rng));
    const double w = c.as<SontagConcept>()->w;
    double brute = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) brute += std::cos(w * mu.location(i)) >= 0 ? mu.mass(i) : 0.0;
    EXPECT_EQ(expect_indicator(Measure(mu), c), brute);
  }
}

TEST(ExpectIndicator, CantorLevelIntervalsExact) {
  const Measure cantor(CantorMeasure{});
  for (int n = 1; n <= 6; ++n) {
    for (const auto& iv : cantor::cantor_level_intervals(n)) {
      EXPECT_NEAR(expect_indicator(cantor, Concept::intervals({Interval::closed(iv.lo, iv.hi)})), iv.mass, 1e-12);
    }
  }
  // Middle thirds carry no mass.
  EXPECT_EQ(expect_indicator(cantor, Concept::middle_thirds({{0, 0}, {1, 1}, {3, 5}})), 0.0);
}

TEST(ExpectIndicator, EmpiricalMeansConverge) {
  const std::vector<Measure> measures{Measure(AtomicMeasure({{0.1, 0.3}, {0.5, 0.3}, {0.9, 0.4}})),
                                      Measure(UniformMeasure{0, 1}), Measure(CantorMeasure{})};
  const std::vector<Concept> concepts{Concept::intervals({Interval::closed(0.2, 0.7)}),
                                      Concept::intervals({Interval::closed(0.0, 0.25), Interval::closed(0.6, 0.95)})};
  for (std::size_t i = 0; i < measures.size(); ++i) {
    for (const auto& c : concepts) {
      const auto xs = sample(measures[i], 1000 + i, 100'000);
      double hits = 0;
      for (double x : xs) hits += member(c, x);
      EXPECT_NEAR(hits / xs.size(), expect_indicator(measures[i], c), 0.01);
    }
  }
}

TEST(ExpectIndicator, GridFallbackWarnsWhenCoarse) {
  const Measure u(UniformMeasure{0, 1});
  IntegrationOptions opt;
  opt.max_arcs = 4;  // force the fallback for a fast-oscillating concept
  opt.grid_cells = 1000;
  const auto r = integrate_indicator(Measure(UniformMeasure{0, 1}), Concept::middle_thirds({{0, 0}}), opt);
  EXPECT_EQ(r.method, IntegrationMethod::exact);
  const auto d = l1_distance_detailed(Concept::sontag(500), Concept::sontag(300), u, opt);
  EXPECT_EQ(d.method, IntegrationMethod::grid);
  ASSERT_EQ(d.warnings.size(), 1u);
  EXPECT_NEAR(d.value, 0.5, 0.05);
}

TEST(Pushforward, ThresholdPartition) {
  const Measure base(UniformMeasure{0, 1});
  const double a = 10, b = 20;
  const auto pf = pushforward(base, {{0.0, 0.8, true, false, a}, {0.8, 1.0, true, true, b}});
  const AtomicMeasure expected({{a, 0.8}, {b, 0.2}});
  auto loc = expected.shared_locations();
  for (int mask = 0; mask < 4; ++mask) {
    const auto c = Concept::atom_labels(loc, {static_cast<std::uint8_t>(mask & 1), static_cast<std::uint8_t>(mask >> 1)});
    EXPECT_NEAR(expect_indicator(pf, c), expect_indicator(Measure(expected), c), 1e-15);
  }
  const auto written = as_atomic(*pf.as<PushforwardMeasure>());
  ASSERT_EQ(written.locations(), expected.locations());
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(written.mass(i), expected.mass(i), 1e-15);
  for (double x : sample(pf, 3, 1000)) EXPECT_TRUE(x == a || x == b);
}

TEST(Pushforward, IdentityPreservesExpectations) {
  const Measure base(UniformMeasure{0, 1});
  // Fine partition sending each cell to its own left end: identity on the grid.
  std::vector<PartitionCell> cells;
  const int k = 1000;
  for (int i = 0; i < k; ++i) cells.push_back({i / double(k), (i + 1) / double(k), true, i == k - 1, i / double(k)});
  const auto pf = pushforward(base, cells);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const double lo = (rng() % k) / double(k), len = (rng() % 300) / double(k);
    const auto c = Concept::intervals({Interval::closed(lo, std::min(1.0, lo + len) - 0.5 / k)});
    EXPECT_NEAR(expect_indicator(pf, c), expect_indicator(base, c), 1.0 / k + 1e-12);
  }
}

TEST(Pushforward, CantorLevelOne) {
  const Measure base(CantorMeasure{});
  const auto pf = pushforward(base, {{0.0, 0.5, true, false, 0.0}, {0.5, 1.0, true, true, 1.0}});
  const auto atomic = as_atomic(*pf.as<PushforwardMeasure>());
  ASSERT_EQ(atomic.size(), 2u);
  EXPECT_NEAR(atomic.mass(0), 0.5, 1e-12);
  EXPECT_NEAR(atomic.mass(1), 0.5, 1e-12);
}

TEST(Pushforward, NonTotalMapIsHardError) {
  const auto pf = pushforward(Measure(UniformMeasure{0, 1}), {{0.0, 0.5, true, false, 0.0}});
  EXPECT_THROW(sample(pf, 1, 100), InvariantViolation);
}

TEST(ProductMeasure, PairsAndFirstCoordinate) {
  const Measure base(AtomicMeasure({{1, 0.5}, {2, 0.5}}));
  const auto lifted = product_lift(base, {0, 1});
  const auto pairs = sample_pairs(*lifted.as<ProductMeasure>(), 5, 1000);
  for (const auto& [x, y] : pairs) {
    EXPECT_TRUE(x == 1 || x == 2);
    EXPECT_GE(y, 0);
    EXPECT_LT(y, 1);
  }
  EXPECT_EQ(expect_indicator(lifted, Concept::intervals({Interval::closed(0, 1.5)})), 0.5);
}
