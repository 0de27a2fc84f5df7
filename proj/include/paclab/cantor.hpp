#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "paclab/error.hpp"

namespace paclab::cantor {

inline constexpr int kMaxDigits = 40;  // 3^40 < 2^64

constexpr std::uint64_t pow3(int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

// Ternary digits of a double in [0, 1), computed exactly from its binary
// representation x = m * 2^-s (no floating-point multiplication by 3).
class ExactTernary {
 public:
  explicit ExactTernary(double x) {
    require(x >= 0.0 && x < 1.0, "ExactTernary: x must lie in [0, 1)");
    if (x == 0.0) return;
    int e = 0;
    const double f = std::frexp(x, &e);
    mantissa_ = static_cast<unsigned __int128>(std::ldexp(f, 53));
    shift_ = 53 - e;
  }

  // floor(x * 3^j) for 0 <= j <= kMaxDigits.
  std::uint64_t scaled_floor(int j) const {
    if (mantissa_ == 0 || shift_ >= 128) return 0;
    return static_cast<std::uint64_t>((mantissa_ * pow3(j)) >> shift_);
  }

  // True when x * 3^j is an integer.
  bool on_grid(int j) const {
    if (mantissa_ == 0) return true;
    if (shift_ >= 128) return false;
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << shift_) - 1;
    return ((mantissa_ * pow3(j)) & mask) == 0;
  }

  // Numerator of the depth-j grid point within `ulps` units in the last place
  // of x, if there is one.
  std::optional<std::uint64_t> near_grid(int j, std::uint64_t ulps) const {
    if (mantissa_ == 0) return 0;
    if (shift_ >= 128 || shift_ <= 0) return std::nullopt;
    const unsigned __int128 v = mantissa_ * pow3(j);
    const unsigned __int128 one = static_cast<unsigned __int128>(1) << shift_;
    const unsigned __int128 rem = v & (one - 1);
    const auto floor = static_cast<std::uint64_t>(v >> shift_);
    const unsigned __int128 slack = static_cast<unsigned __int128>(ulps) * pow3(j);
    if (rem <= slack) return floor;
    if (one - rem <= slack) return floor + 1;
    return std::nullopt;
  }

  // The j-th ternary digit after the point (1-based).
  int digit(int j) const {
    return static_cast<int>(scaled_floor(j) - 3 * scaled_floor(j - 1));
  }

 private:
  unsigned __int128 mantissa_ = 0;
  int shift_ = 0;
};

// The Cantor function (distribution function of the Haar measure on the
// Cantor set), evaluated from the exact ternary digits of x; truncation error
// at most 2^-40. The function is only Hoelder-continuous, so a double that
// rounds a ternary grid point such as 1/3 would be off by ~1e-11; inputs
// within 4 ulps of a depth-30 grid point are evaluated at that point.
inline constexpr int kSnapDepth = 30;

inline double cantor_function(double x) {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  const ExactTernary t(x);
  if (const auto grid = t.near_grid(kSnapDepth, 4)) {
    std::uint64_t m = *grid;
    int digits[kSnapDepth];
    for (int j = kSnapDepth - 1; j >= 0; --j) digits[j] = static_cast<int>(m % 3), m /= 3;
    if (m > 0) return 1.0;
    double value = 0.0;
    double weight = 0.5;
    for (int d : digits) {
      if (d == 1) return value + weight;
      if (d == 2) value += weight;
      weight *= 0.5;
    }
    return value;
  }
  double value = 0.0;
  double weight = 0.5;
  for (int j = 1; j <= kMaxDigits; ++j) {
    const int d = t.digit(j);
    if (d == 1) return value + weight;
    if (d == 2) value += weight;
    weight *= 0.5;
  }
  return value;
}

// One closed interval of the level-n approximation to the Cantor set:
// [numerator / 3^n, (numerator + 1) / 3^n].
struct LevelInterval {
  int level = 0;
  std::uint64_t index = 0;  // 0-based, increasing left to right
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double lo = 0.0;
  double hi = 1.0;
  double mass = 1.0;  // Haar mass 2^-n
};

// Left-endpoint numerator (over 3^level) of level interval `index`: its
// ternary digits are 2 * (bits of index), most significant first.
constexpr std::uint64_t level_numerator(int level, std::uint64_t index) {
  std::uint64_t a = 0;
  for (int r = level - 1; r >= 0; --r) a = 3 * a + 2 * ((index >> r) & 1U);
  return a;
}

inline LevelInterval level_interval(int level, std::uint64_t index) {
  require(level >= 0 && level <= kMaxDigits, "level_interval: level out of range");
  require(level >= 64 || index < (std::uint64_t{1} << level), "level_interval: index out of range");
  LevelInterval out;
  out.level = level;
  out.index = index;
  out.numerator = level_numerator(level, index);
  out.denominator = pow3(level);
  const auto den = static_cast<double>(out.denominator);
  out.lo = static_cast<double>(out.numerator) / den;
  out.hi = static_cast<double>(out.numerator + 1) / den;
  out.mass = std::ldexp(1.0, -level);
  return out;
}

// The 2^n closed intervals of the n-th stage of the middle-thirds
// construction, left to right.
inline std::vector<LevelInterval> cantor_level_intervals(int n) {
  require(n >= 0 && n <= 24, "cantor_level_intervals: 0 <= n <= 24");
  std::vector<LevelInterval> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) out.push_back(level_interval(n, i));
  return out;
}

// Ternary digits of a point on the depth-d grid (x * 3^d an integer up to
// rounding), recovered by rounding x * 3^d to the nearest integer. Valid for
// d <= 30, where the rounding error of the product stays far below 1/2.
inline std::vector<int> grid_ternary_digits(double x, int depth) {
  require(depth >= 0 && depth <= 30, "grid_ternary_digits: depth must be in [0, 30]");
  auto scaled = static_cast<std::uint64_t>(std::llround(x * static_cast<double>(pow3(depth))));
  std::vector<int> digits(static_cast<std::size_t>(depth));
  for (int j = depth - 1; j >= 0; --j) {
    digits[static_cast<std::size_t>(j)] = static_cast<int>(scaled % 3);
    scaled /= 3;
  }
  return digits;
}

}  // namespace paclab::cantor
