#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include "paclab/error.hpp"

namespace paclab {

// Small exact rational for accuracy schedules such as 5^-k. Overflow in
// arithmetic is reported, not wrapped.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    require(den != 0, "Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Parses "p/q" or an integer; anything else is read as a decimal and
  // approximated by continued fractions.
  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
      }
      std::size_t used = 0;
      const long long whole = std::stoll(text, &used);
      if (used == text.size()) return Rational(whole);
      return from_double(std::stod(text));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("Rational: cannot parse '" + text + "'");
    }
  }

  // Best approximation with denominator at most 10^12.
  static Rational from_double(double x) {
    require(std::isfinite(x), "Rational: non-finite value");
    constexpr std::int64_t max_den = 1'000'000'000'000;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int i = 0; i < 64; ++i) {
      const double a = std::floor(v);
      if (std::abs(a) > 9e15) break;
      const auto ai = static_cast<std::int64_t>(a);
      const std::int64_t q2 = ai * q1 + q0;
      if (q2 > max_den) break;
      const std::int64_t p2 = ai * p1 + p0;
      p0 = p1, q0 = q1, p1 = p2, q1 = q2;
      if (static_cast<double>(p1) / static_cast<double>(q1) == x) break;
      const double frac = v - a;
      if (frac == 0.0) break;
      v = 1.0 / frac;
    }
    return Rational(p1, q1);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)), checked_mul(a.den_, b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
    return r;
  }
  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
    return r;
  }
  void normalize() {
    if (den_ < 0) num_ = -num_, den_ = -den_;
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) num_ /= g, den_ /= g;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace paclab
