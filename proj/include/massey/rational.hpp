#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace massey {

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// Always canonical: gcd(|num|, den) = 1, den > 0, zero is 0/1.  Serializes as
/// "p/q", or "p" when the denominator is one.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);
  explicit Rational(mpq_class value);

  /// Parses "p", "-p", "p/q".  Throws std::invalid_argument on malformed input
  /// or a zero denominator.
  static Rational parse(std::string_view text);

  std::string str() const;

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  int sign() const { return sgn(value_); }

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  Rational operator-() const { return Rational(mpq_class(-value_)); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

/// (-1)^parity as a rational.
inline Rational sign_of_parity(int parity) { return (parity & 1) ? Rational(-1) : Rational(1); }

}  // namespace massey
