#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lt3 {

// Exact rational with 64-bit numerator/denominator, always normalized
// (den > 0, gcd(|num|,den) == 1). Intermediate products run through
// __int128; overflow of the normalized result throws instead of wrapping.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rat() = default;
  Rat(std::int64_t n) : num(n), den(1) {}
  Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  static Rat make128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a == 0) a = 1;
    n /= a; d /= a;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rat: overflow");
    Rat r; r.num = (std::int64_t)n; r.den = (std::int64_t)d;
    return r;
  }
  static Rat make(std::int64_t n, std::int64_t d) { return make128(n, d); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make128((__int128)a.num * b.den + (__int128)b.num * a.den,
                   (__int128)a.den * b.den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make128((__int128)a.num * b.den - (__int128)b.num * a.den,
                   (__int128)a.den * b.den);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make128((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num == 0) throw std::domain_error("Rat: division by zero");
    return make128((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
  Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
  Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
  Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  bool is_integer() const { return den == 1; }
  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace lt3
