#pragma once

// Overflow-checked 64-bit integer arithmetic and an exact rational type.
// Every lattice identity in this library is computed through these helpers,
// so a wraparound surfaces as an exception instead of a fake identity.

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ratpencil {

using Int = std::int64_t;

class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what)
      : std::overflow_error("integer overflow in " + what) {}
};

namespace checked {

inline Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("add");
  return r;
}

inline Int sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("sub");
  return r;
}

inline Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("mul");
  return r;
}

inline Int neg(Int a) { return sub(0, a); }

/// Narrow a 128-bit intermediate back to Int, throwing if it does not fit.
inline Int narrow(__int128 v) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN)) {
    throw OverflowError("narrow");
  }
  return static_cast<Int>(v);
}

}  // namespace checked

/// Exact rational number with a positive denominator in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(Int value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Int num, Int den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& x, const Rational& y) {
    const Int g = std::gcd(x.den_, y.den_);
    const Int lhs = checked::mul(x.num_, y.den_ / g);
    const Int rhs = checked::mul(y.num_, x.den_ / g);
    return {checked::add(lhs, rhs), checked::mul(x.den_ / g, y.den_)};
  }
  friend Rational operator-(const Rational& x) { return {checked::neg(x.num_), x.den_}; }
  friend Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }
  friend Rational operator*(const Rational& x, const Rational& y) {
    const Int g1 = std::gcd(x.num_, y.den_);
    const Int g2 = std::gcd(y.num_, x.den_);
    const Int n = checked::mul(x.num_ / (g1 ? g1 : 1), y.num_ / (g2 ? g2 : 1));
    const Int d = checked::mul(x.den_ / (g2 ? g2 : 1), y.den_ / (g1 ? g1 : 1));
    return {n, d};
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.num_ == 0) throw std::domain_error("rational division by zero");
    return x * Rational(y.den_, y.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
    const __int128 l = static_cast<__int128>(x.num_) * y.den_;
    const __int128 r = static_cast<__int128>(y.num_) * x.den_;
    return l <=> r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = checked::neg(num_);
      den_ = checked::neg(den_);
    }
    const Int g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Int num_ = 0;
  Int den_ = 1;
};

}  // namespace ratpencil
