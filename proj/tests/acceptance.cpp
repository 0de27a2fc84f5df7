// Desk-scale acceptance run: one PASS/FAIL line per criterion, non-zero exit
// if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "paclab/paclab.hpp"

using namespace paclab;
namespace cn = paclab::construction;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.pass = false;
    out.detail << " [runtime " << secs << " s exceeds " << limit_seconds << " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s %d: %s (%.2f s)%s\n", out.pass ? "PASS" : "FAIL", id, title, secs, out.detail.str().c_str());
  std::fflush(stdout);
}

AtomicMeasure random_atomic(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Atom> atoms;
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back({static_cast<double>(i) + 0.5 * u(rng), u(rng) + 0.01});
    total += atoms.back().mass;
  }
  double rest = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    atoms[i].mass = i + 1 == n ? rest : atoms[i].mass / total;
    rest -= atoms[i].mass;
  }
  return AtomicMeasure(atoms);
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> b(n);
  for (auto& x : b) x = rng() & 1;
  return b;
}

}  // namespace

int main() {
  criterion(1, "closed form of the two-neuron preactivation", 1.0, [](Outcome& o) {
    double worst = 0;
    for (double w : {0.1, 1.0, 5.0, 100.0}) {
      for (int i = 0; i < 25'000; ++i) {
        const double x = -100.0 + 200.0 * i / 24'999.0;
        const double composed = sontag::phi(w * x, 100) + sontag::phi(-w * x, 100) - 1.0;
        worst = std::max(worst, std::abs(composed - sontag::rho(x, w, 100)));
      }
    }
    o.detail << " max deviation " << worst << " over 1e5 points";
    o.check(worst <= 1e-12, "deviation above 1e-12");
  });

  criterion(2, "network output equals [cos(wx) >= 0]", 0, [](Outcome& o) {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> ux(-100, 100), uw(0, 100);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1'000'000; ++i) {
      const double x = ux(rng), w = uw(rng);
      mismatches += sontag::net_output(x, {w, 100}) != (std::cos(w * x) >= 0 ? 1 : 0);
    }
    o.detail << " " << mismatches << " mismatches in 1e6 pairs";
    o.check(mismatches == 0, "mismatch");
  });

  criterion(3, "log-prime tuples are shattered", 30.0, [](Outcome& o) {
    const auto verified = [](const std::vector<double>& pts, const sontag::CensusResult& c) {
      std::size_t ok = 0;
      for (const auto& r : c.per_labeling) {
        if (!r.witness) continue;
        bool all = true;
        for (std::size_t j = 0; j < pts.size(); ++j) all = all && sontag::net_output(pts[j], {*r.witness, 100}) == r.labels[j];
        ok += all;
      }
      return ok;
    };
    const std::vector<double> three{std::log(2.0), std::log(3.0), std::log(5.0)};
    const auto c3 = sontag::shatter_census(three, {0.0, 1e4, 100, 100'000'000});
    const auto five = sontag::rationally_independent_points(5);
    const auto c5 = sontag::shatter_census(five, {0.0, 1e6, 100, 100'000'000}, 4);
    const auto v3 = verified(three, c3), v5 = verified(five, c5);
    o.detail << " 3 points: " << v3 << "/" << c3.total << ", 5 points: " << v5 << "/" << c5.total << " verified";
    o.check(c3.realized == 8 && v3 == 8, "3-point census");
    o.check(c5.realized == 32 && v5 == 32, "5-point census");
  });

  criterion(4, "Sontag concepts w = 2..64 are 1/2-separated under uniform", 0, [](Outcome& o) {
    const Measure mu(UniformMeasure{0, 2 * sontag::kPi});
    std::vector<Concept> cs;
    for (int k = 1; k <= 6; ++k) cs.push_back(Concept::sontag(std::ldexp(1.0, k)));
    std::vector<double> d(36, 0.0);
    double lo = 1, hi = 0, worst_exact = 0;
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        const auto r = l1_distance_detailed(cs[i], cs[j], mu);
        o.check(r.method == IntegrationMethod::exact, "arc integration fell back");
        d[i * 6 + j] = d[j * 6 + i] = r.value;
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
        worst_exact = std::max(worst_exact, std::abs(r.value - 0.5));
      }
    }
    const auto packing = bounds::greedy_packing(bounds::DistanceMatrix(6, d), 0.4);
    o.detail << " distances in [" << lo << ", " << hi << "], max |d - 1/2| = " << worst_exact
             << ", greedy packing at 0.4 selects " << packing.size();
    o.check(lo >= 0.48 && hi <= 0.52, "distance outside [0.48, 0.52]");
    o.check(worst_exact <= 1e-9, "exact pair off by more than 1e-9");
    o.check(packing.size() == 6, "packing did not select all 6");
  });

  criterion(5, "adversarial deviation does not decay; atomic census does", 300.0, [](Outcome& o) {
    const Measure circle(UniformMeasure{0, 2 * sontag::kPi});
    std::vector<double> medians;
    for (std::size_t n : {4, 8, 16}) {
      const auto s = learner::gc_deviation_adversarial(circle, n, 500, 555, {}, 4);
      medians.push_back(s.median);
      o.detail << " n=" << n << " median " << s.median << " (" << s.flagged << " flagged);";
      o.check(s.median >= 0.4, "median below 0.4 at n = " + std::to_string(n));
      o.check(s.flagged == 0, "flagged trials at n = " + std::to_string(n));
    }
    for (double m : medians) o.check(std::abs(m - medians[0]) <= 0.1, "median drifted from its n = 4 value");
    std::vector<Atom> atoms;
    for (int i = 0; i < 10; ++i) atoms.push_back({0.37 * (i + 1), 0.1});
    atoms.back().mass = 1.0 - 0.1 * 9;
    const Measure ten{AtomicMeasure(atoms)};
    std::vector<Concept> family;
    for (int k = 1; k <= 64; ++k) family.push_back(Concept::sontag(0.25 * k));
    const auto census = learner::gc_deviation_census(family, ten, 10'000, 100, 556, 4);
    o.detail << " census at n=1e4: max " << census.max;
    o.check(census.max <= 0.05, "census deviation above 0.05");
  });

  criterion(6, "Hamming packings meet the guaranteed count", 10.0, [](Outcome& o) {
    for (std::size_t n : {50, 100, 200}) {
      const auto h = bounds::hamming_packing(n, 0.21);
      const auto need = static_cast<std::size_t>(std::ceil(std::exp(2.0 * 0.08 * 0.08 * static_cast<double>(n)) - 1e-12));
      const auto min_bits = static_cast<std::size_t>(std::ceil(0.42 * static_cast<double>(n) - 1e-9));
      std::vector<std::string> words;
      for (const auto& c : h.codewords) words.push_back(c.to_string());
      std::size_t closest = n;
      for (std::size_t a = 0; a < words.size(); ++a) {
        for (std::size_t b = a + 1; b < words.size(); ++b) {
          std::size_t diff = 0;
          for (std::size_t i = 0; i < n; ++i) diff += words[a][i] != words[b][i];
          closest = std::min(closest, diff);
        }
      }
      o.detail << " n=" << n << ": " << words.size() << " >= " << need << " words, min distance " << closest << "/" << n
               << ";";
      o.check(words.size() >= need, "too few codewords at n = " + std::to_string(n));
      o.check(words.size() < 2 || closest >= min_bits, "codewords closer than 0.42 n at n = " + std::to_string(n));
    }
  });

  criterion(7, "estimated sample complexity sits in the theoretical bracket", 600.0, [](Outcome& o) {
    const auto inst = cn::build_measure(cn::ComplexitySchedule::standard());
    const auto profile = cn::theoretical_profile(inst, 0.1);
    const auto problem = learner::LearningProblem::from_instance(inst);
    learner::EstimatorOptions opt;
    opt.threads = 4;
    std::vector<std::uint64_t> n_hat;
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto e = learner::estimate_sample_complexity(problem, inst.eps(k), 0.1, 400, 1, opt);
      const auto lower = static_cast<std::uint64_t>(std::ceil(0.0128 * static_cast<double>(inst.f(k)) - 1e-12));
      const auto upper = bounds::bi_upper_log2(inst.eps(k), 0.1, static_cast<double>(inst.f(k)));
      o.detail << " eps_" << k << ": " << lower << " <= n_hat " << e.n_hat << " <= " << upper << ";";
      o.check(e.converged, "estimator hit its cap");
      o.check(lower <= e.n_hat && e.n_hat <= upper, "bracket violated at k = " + std::to_string(k));
      o.check(profile.rows[k - 1].upper == upper, "profile upper bound disagrees");
      n_hat.push_back(e.n_hat);
    }
    const double ratio = static_cast<double>(n_hat[1]) / static_cast<double>(std::max<std::uint64_t>(1, n_hat[0]));
    o.detail << " ratio " << ratio;
    o.check(ratio >= 5.0, "n_hat(eps_2) / n_hat(eps_1) below 5");
  });

  criterion(8, "default construction arithmetic", 0, [](Outcome& o) {
    const auto inst = cn::build_measure(cn::ComplexitySchedule::standard());
    long double total = 0;
    for (double m : inst.measure.masses()) total += m;
    o.detail << " m = (" << inst.levels[0].mass.to_string() << ", " << inst.levels[1].mass.to_string() << "), |F| = ("
             << inst.levels[0].atoms.size() << ", " << inst.levels[1].atoms.size() << "), residual "
             << inst.residual_mass.to_string() << ", total " << static_cast<double>(total);
    o.check(inst.levels[0].mass == Rational(4, 5) && inst.levels[1].mass == Rational(4, 25), "level masses");
    o.check(inst.levels[0].atoms.size() == 25 && inst.levels[1].atoms.size() == 600, "level sizes");
    o.check(inst.residual_mass == Rational(1, 25) && inst.residual.mass == 0.04, "residual");
    o.check(std::abs(static_cast<double>(total) - 1.0) <= 1e-12, "total mass");
  });

  criterion(9, "Cantor feasibility map for C_N", 60.0, [](Outcome& o) {
    const auto yes = order_class::cantor_shatter_search(1, 5, {0});
    bool witness_ok = yes.status == order_class::FeasibilityStatus::feasible && yes.witness.has_value();
    if (witness_ok) {
      const auto& w = *yes.witness;
      witness_ok = order_class::is_member_of_order_class(w, 5);
      for (int i = 0; i <= 3000; ++i) {
        const double x = i / 3000.0;
        if (x <= 1.0 / 3) witness_ok = witness_ok && member(w, x) == 1;
        if (x >= 2.0 / 3) witness_ok = witness_ok && member(w, x) == 0;
      }
      witness_ok = witness_ok && member(w, 1.0 / 3) == 1 && member(w, 2.0 / 3) == 0;
    }
    o.detail << " (n=1, J={1}, N=5) " << order_class::to_string(yes.status) << (witness_ok ? " with verified witness" : "");
    o.check(witness_ok, "no verified witness for J = {1}, N = 5");
    std::size_t infeasible = 0;
    std::string last;
    for (std::uint64_t order = 1; order <= 64; ++order) {
      const auto r = order_class::cantor_shatter_search(1, order, {0, 1});
      infeasible += r.status == order_class::FeasibilityStatus::infeasible && !r.certificate.empty();
      if (order == 64) last = r.certificate;
    }
    o.detail << "; (n=1, J={1,2}) infeasible for " << infeasible << "/64 orders; certificate at N=64: " << last;
    o.check(infeasible == 64, "J = {1,2} not certified infeasible for every N <= 64");
  });

  criterion(10, "oracle identities and cover/packing validity", 0, [](Outcome& o) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t bad_error = 0, bad_expect = 0, bad_l1 = 0;
    for (int t = 0; t < 1000; ++t) {
      const auto mu = random_atomic(rng, 1 + rng() % 15);
      const auto bits_h = random_bits(rng, mu.size()), bits_t = random_bits(rng, mu.size());
      const auto h = Concept::atom_labels(mu.shared_locations(), bits_h);
      const auto target = Concept::atom_labels(mu.shared_locations(), bits_t);
      const double w = 20 * u(rng);
      const auto s = Concept::sontag(w);
      double err = 0, expect = 0, l1 = 0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        const int in_s = std::cos(w * mu.location(i)) >= 0 ? 1 : 0;
        if (bits_h[i] != bits_t[i]) err += mu.mass(i);
        if (in_s) expect += mu.mass(i);
        if (bits_h[i] != in_s) l1 += mu.mass(i);
      }
      bad_error += learner::true_error(h, target, mu) != err;
      bad_expect += expect_indicator(Measure(mu), s) != expect;
      bad_l1 += l1_distance(h, s, Measure(mu)) != l1;
    }
    o.detail << " mismatches: true_error " << bad_error << ", expect_indicator " << bad_expect << ", l1_distance " << bad_l1;
    o.check(bad_error == 0 && bad_expect == 0 && bad_l1 == 0, "oracle mismatch");

    std::size_t families = 0, invalid = 0;
    for (int t = 0; t < 200; ++t) {
      const auto mu = random_atomic(rng, 2 + rng() % 7);
      const std::size_t m = 1 + rng() % 12;
      std::vector<Concept> cs;
      for (std::size_t i = 0; i < m; ++i) cs.push_back(Concept::atom_labels(mu.shared_locations(), random_bits(rng, mu.size())));
      const bounds::DistanceMatrix d(bounds::FiniteFamily{cs, mu});
      const double eps = 0.05 + 0.4 * u(rng);
      const auto cover = bounds::greedy_cover(d, eps);
      const auto greedy = bounds::greedy_packing(d, eps);
      const auto best = bounds::exact_packing(d, eps);
      std::size_t max_packing = 0, min_cover = m;
      for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
        std::vector<std::size_t> sel;
        for (std::size_t i = 0; i < m; ++i) {
          if ((mask >> i) & 1) sel.push_back(i);
        }
        bool packs = true, covers = true;
        for (std::size_t a = 0; a < sel.size() && packs; ++a) {
          for (std::size_t b = a + 1; b < sel.size(); ++b) packs = packs && d(sel[a], sel[b]) + bounds::kDistanceSlack >= eps;
        }
        for (std::size_t i = 0; i < m && covers; ++i) {
          bool near = false;
          for (std::size_t c : sel) near = near || d(i, c) <= eps + bounds::kDistanceSlack;
          covers = near;
        }
        if (packs) max_packing = std::max(max_packing, sel.size());
        if (covers) min_cover = std::min(min_cover, sel.size());
      }
      ++families;
      const bool ok = bounds::is_cover(d, cover) && cover.size() >= min_cover && bounds::is_packing(d, greedy.selected, eps) &&
                      bounds::is_packing(d, best.selected, eps) && best.size() == max_packing &&
                      greedy.size() <= max_packing;
      invalid += !ok;
    }
    o.detail << "; " << families - invalid << "/" << families << " random families pass exhaustive checks";
    o.check(invalid == 0, "cover/packing validity");
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAILED", failures);
  return failures == 0 ? 0 : 1;
}
