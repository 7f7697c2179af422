#pragma once

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace detsieve {

using i128 = __int128;

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string i128_to_string(i128 v);

// exact fraction, denominator positive, always gcd-reduced.
// arithmetic is overflow-checked and raises BudgetError instead of wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(i128 value) : num_(value), den_(1) {}
  Rational(i128 num, i128 den) : num_(num), den_(den) { normalize(); }

  i128 num() const { return num_; }
  i128 den() const { return den_; }

  Rational operator+(const Rational& o) const {
    return Rational(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                    checked_mul(den_, o.den_));
  }
  Rational operator-(const Rational& o) const {
    return Rational(checked_sub(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                    checked_mul(den_, o.den_));
  }
  Rational operator*(const Rational& o) const {
    // cross-reduce first so intermediate products stay small
    i128 g1 = gcd128(num_, o.den_);
    i128 g2 = gcd128(o.num_, den_);
    i128 n1 = g1 == 0 ? num_ : num_ / g1;
    i128 d2 = g1 == 0 ? o.den_ : o.den_ / g1;
    i128 n2 = g2 == 0 ? o.num_ : o.num_ / g2;
    i128 d1 = g2 == 0 ? den_ : den_ / g2;
    return Rational(checked_mul(n1, n2), checked_mul(d1, d2));
  }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw ValidationError("rational division by zero");
    return *this * Rational(o.den_, o.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
  }
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  std::string to_string() const;

  static i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw BudgetError("rational arithmetic overflow");
    return r;
  }
  static i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw BudgetError("rational arithmetic overflow");
    return r;
  }
  static i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw BudgetError("rational arithmetic overflow");
    return r;
  }

 private:
  void normalize() {
    if (den_ == 0) throw ValidationError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    i128 g = gcd128(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  i128 num_;
  i128 den_;
};

}  // namespace detsieve
