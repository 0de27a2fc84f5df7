#pragma once

// Covering and packing of finite concept families in L1(mu), the
// Benedek-Itai sample-size bounds built on them, and an explicit packing of
// the Hamming cube.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "paclab/concept.hpp"
#include "paclab/error.hpp"
#include "paclab/measure.hpp"
#include "paclab/parallel.hpp"
#include "paclab/random.hpp"

namespace paclab::bounds {

// Slack absorbed by distance comparisons: sums of atom masses are exact only
// up to a few ulps.
inline constexpr double kDistanceSlack = 1e-12;

struct FiniteFamily {
  std::vector<Concept> concepts;
  AtomicMeasure measure;

  std::size_t size() const { return concepts.size(); }
};

// Symmetric matrix of exact L1(mu) distances, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix(const FiniteFamily& family, unsigned threads = 1) : n_(family.size()), d_(n_ * n_, 0.0) {
    require(n_ > 0, "FiniteFamily must be non-empty");
    const auto& mu = family.measure;
    // Membership table first: one pass of member() per (concept, atom).
    std::vector<std::uint8_t> in(n_ * mu.size());
    parallel_for(n_, threads, [&](std::size_t i) {
      for (std::size_t a = 0; a < mu.size(); ++a) {
        in[i * mu.size() + a] = static_cast<std::uint8_t>(member(family.concepts[i], mu.location(a)));
      }
    });
    parallel_for(n_, threads, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        double sum = 0.0;
        for (std::size_t a = 0; a < mu.size(); ++a) {
          if (in[i * mu.size() + a] != in[j * mu.size() + a]) sum += mu.mass(a);
        }
        d_[i * n_ + j] = sum;
      }
    });
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) d_[i * n_ + j] = d_[j * n_ + i];
    }
  }

  // Precomputed row-major distances, e.g. under a non-atomic measure.
  DistanceMatrix(std::size_t n, std::vector<double> values) : n_(n), d_(std::move(values)) {
    require(n_ > 0 && d_.size() == n_ * n_, "DistanceMatrix: need n * n values");
    for (std::size_t i = 0; i < n_; ++i) {
      require(d_[i * n_ + i] == 0.0, "DistanceMatrix: diagonal must be zero");
      for (std::size_t j = 0; j < i; ++j) {
        require(d_[i * n_ + j] == d_[j * n_ + i] && d_[i * n_ + j] >= 0.0,
                "DistanceMatrix: distances must be symmetric and non-negative");
      }
    }
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

struct Cover {
  std::vector<std::size_t> centers;
  double radius = 0.0;

  std::size_t size() const { return centers.size(); }
};

struct PackingResult {
  std::vector<std::size_t> selected;
  double radius = 0.0;
  bool certified = false;  // true: maximum packing (exact); false: greedy lower bound

  std::size_t size() const { return selected.size(); }
};

inline bool is_cover(const DistanceMatrix& d, const Cover& c) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    bool covered = false;
    for (auto center : c.centers) covered = covered || d(i, center) <= c.radius + kDistanceSlack;
    if (!covered) return false;
  }
  return true;
}

inline bool is_packing(const DistanceMatrix& d, const std::vector<std::size_t>& selected, double radius) {
  for (std::size_t a = 0; a < selected.size(); ++a) {
    for (std::size_t b = a + 1; b < selected.size(); ++b) {
      if (d(selected[a], selected[b]) + kDistanceSlack < radius) return false;
    }
  }
  return true;
}

// Farthest-point greedy cover with centers drawn from the family; its size
// upper-bounds the internal covering number.
inline Cover greedy_cover(const DistanceMatrix& d, double eps) {
  require(eps > 0.0, "greedy_cover: eps must be positive");
  Cover cover{{0}, eps};
  std::vector<double> nearest(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) nearest[i] = d(i, 0);
  while (true) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (nearest[i] > nearest[far]) far = i;
    }
    if (nearest[far] <= eps + kDistanceSlack) break;
    cover.centers.push_back(far);
    for (std::size_t i = 0; i < d.size(); ++i) nearest[i] = std::min(nearest[i], d(i, far));
  }
  ensure(is_cover(d, cover), "greedy_cover: output is not a cover");
  return cover;
}

inline Cover greedy_cover(const FiniteFamily& family, double eps, unsigned threads = 1) {
  return greedy_cover(DistanceMatrix(family, threads), eps);
}

// First-fit packing in index order: maximal by inclusion, so its size is a
// lower bound on the packing number M(radius).
inline PackingResult greedy_packing(const DistanceMatrix& d, double radius) {
  require(radius > 0.0, "greedy_packing: radius must be positive");
  PackingResult out{{}, radius, false};
  for (std::size_t i = 0; i < d.size(); ++i) {
    bool separated = true;
    for (auto s : out.selected) {
      if (d(i, s) + kDistanceSlack < radius) {
        separated = false;
        break;
      }
    }
    if (separated) out.selected.push_back(i);
  }
  ensure(is_packing(d, out.selected, radius), "greedy_packing: output is not separated");
  return out;
}

inline PackingResult greedy_packing(const FiniteFamily& family, double radius, unsigned threads = 1) {
  return greedy_packing(DistanceMatrix(family, threads), radius);
}

inline constexpr std::size_t kExactPackingLimit = 24;

// Maximum radius-separated subset by branch and bound over bitmasks
// (maximum clique of the "far enough apart" graph).
inline PackingResult exact_packing(const DistanceMatrix& d, double radius) {
  require(radius > 0.0, "exact_packing: radius must be positive");
  require(d.size() <= kExactPackingLimit, "exact_packing: at most 24 concepts");
  const std::size_t n = d.size();
  std::vector<std::uint32_t> compatible(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && d(i, j) + kDistanceSlack >= radius) compatible[i] |= std::uint32_t{1} << j;
    }
  }
  std::uint32_t best = 0;
  auto search = [&](auto&& self, std::uint32_t chosen, std::uint32_t candidates) -> void {
    if (std::popcount(chosen) > std::popcount(best)) best = chosen;
    while (candidates != 0) {
      if (std::popcount(chosen) + std::popcount(candidates) <= std::popcount(best)) return;
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      self(self, chosen | (std::uint32_t{1} << v), candidates & compatible[static_cast<std::size_t>(v)]);
    }
  };
  const std::uint32_t all = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
  search(search, 0, all);
  PackingResult out{{}, radius, true};
  for (std::size_t i = 0; i < n; ++i) {
    if (best & (std::uint32_t{1} << i)) out.selected.push_back(i);
  }
  ensure(is_packing(d, out.selected, radius), "exact_packing: output is not separated");
  return out;
}

// Exact packing for small families, greedy beyond kExactPackingLimit.
inline PackingResult packing(const DistanceMatrix& d, double radius) {
  return d.size() <= kExactPackingLimit ? exact_packing(d, radius) : greedy_packing(d, radius);
}

// ---------------------------------------------------------------------------
// Sample-size bounds. Logarithms are base 2 throughout.

namespace detail {
inline std::uint64_t ceil_count(double v) {
  if (!(v > 0.0)) return 0;
  return static_cast<std::uint64_t>(std::ceil(v - 1e-9 * v));
}
}  // namespace detail

// ceil((32 / eps) * (log2_k + log2(1 / delta))), for covers too large to
// count directly.
inline std::uint64_t bi_upper_log2(double eps, double delta, double log2_k) {
  require(eps > 0.0 && eps < 1.0, "bi_upper: eps must lie in (0, 1)");
  require(delta > 0.0 && delta <= 1.0, "bi_upper: delta must lie in (0, 1]");
  require(log2_k >= 0.0, "bi_upper: cover size must be at least 1");
  return detail::ceil_count((32.0 / eps) * (log2_k - std::log2(delta)));
}

// Samples sufficient for minimal-empirical-risk learning to accuracy eps
// with confidence 1 - delta, given an eps/2-cover of size k.
inline std::uint64_t bi_upper(double eps, double delta, std::uint64_t k) {
  require(k >= 1, "bi_upper: cover size must be at least 1");
  return bi_upper_log2(eps, delta, std::log2(static_cast<double>(k)));
}

// Samples necessary for any learner to reach accuracy eps: ceil(lg M(2 eps)),
// with M estimated from below by `packing`.
inline std::uint64_t bi_lower(double eps, const DistanceMatrix& d) {
  require(eps > 0.0 && eps < 1.0, "bi_lower: eps must lie in (0, 1)");
  const auto m = packing(d, 2.0 * eps).size();
  return detail::ceil_count(std::log2(static_cast<double>(m)));
}

inline std::uint64_t bi_lower(double eps, const FiniteFamily& family, unsigned threads = 1) {
  return bi_lower(eps, DistanceMatrix(family, threads));
}

// ---------------------------------------------------------------------------
// Hamming cube packing.

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static BitVector random(std::size_t n, Rng& rng) {
    BitVector v(n);
    for (auto& w : v.words_) w = rng();
    v.trim();
    return v;
  }

  std::size_t dimension() const { return n_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    words_[i / 64] = value ? (words_[i / 64] | bit) : (words_[i / 64] & ~bit);
  }

  friend std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) d += static_cast<std::size_t>(std::popcount(a.words_[i] ^ b.words_[i]));
    return d;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) s[i] = test(i) ? '1' : '0';
    return s;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void trim() {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Guaranteed packing size in the Hamming cube: ceil(exp(2 (1/2 - 2 eps)^2 n)).
inline std::uint64_t hamming_packing_bound(std::size_t n, double eps) {
  const double gap = 0.5 - 2.0 * eps;
  return detail::ceil_count(std::exp(2.0 * gap * gap * static_cast<double>(n)));
}

// Smallest number of differing bits meeting normalized distance 2 eps.
inline std::size_t hamming_min_bits(std::size_t n, double eps) {
  return static_cast<std::size_t>(detail::ceil_count(2.0 * eps * static_cast<double>(n)));
}

struct HammingPacking {
  std::size_t dimension = 0;
  double eps = 0.0;
  std::size_t min_bits = 0;
  std::uint64_t bound = 0;
  std::vector<BitVector> codewords;
};

struct HammingOptions {
  std::uint64_t seed = 1;
  std::uint64_t restart_factor = 50;  // restarts allowed = factor * bound
  std::size_t patience = 256;         // consecutive rejections ending a restart
};

// Greedy selection over fair-coin candidates, starting from the zero word,
// restarted until the guaranteed count is met.
inline HammingPacking hamming_packing(std::size_t n, double eps, const HammingOptions& opt = {}) {
  require(n >= 1, "hamming_packing: dimension must be positive");
  require(eps > 0.0 && eps <= 0.25, "hamming_packing: eps must lie in (0, 1/4]");
  HammingPacking out;
  out.dimension = n;
  out.eps = eps;
  out.min_bits = hamming_min_bits(n, eps);
  out.bound = hamming_packing_bound(n, eps);
  Rng rng = make_rng(opt.seed);
  const std::uint64_t restarts = std::max<std::uint64_t>(1, opt.restart_factor * out.bound);
  for (std::uint64_t r = 0; r < restarts && out.codewords.size() < out.bound; ++r) {
    std::vector<BitVector> code{BitVector(n)};
    std::size_t misses = 0;
    while (code.size() < out.bound && misses < opt.patience) {
      BitVector candidate = BitVector::random(n, rng);
      bool far = true;
      for (const auto& c : code) {
        if (hamming_distance(c, candidate) < out.min_bits) {
          far = false;
          break;
        }
      }
      if (far) {
        code.push_back(std::move(candidate));
        misses = 0;
      } else {
        ++misses;
      }
    }
    if (code.size() > out.codewords.size()) out.codewords = std::move(code);
  }
  if (out.codewords.size() < out.bound) {
    throw BudgetExceeded("hamming_packing: found " + std::to_string(out.codewords.size()) + " of " +
                         std::to_string(out.bound) + " codewords");
  }
  for (std::size_t a = 0; a < out.codewords.size(); ++a) {
    for (std::size_t b = a + 1; b < out.codewords.size(); ++b) {
      ensure(hamming_distance(out.codewords[a], out.codewords[b]) >= out.min_bits,
             "hamming_packing: codewords too close");
    }
  }
  return out;
}

}  // namespace paclab::bounds
