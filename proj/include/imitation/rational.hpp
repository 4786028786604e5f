#pragma once

// Exact rational numbers backed by GMP. Every payoff, relative payoff and
// exploitation value in the engine is a Rational; there is no floating point
// on any analysis path.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace imitation {

class RationalFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t numerator, std::int64_t denominator);

  /// Parses "n", "-n", "p/q" (q > 0 after sign normalisation). Whitespace is
  /// not accepted. Throws RationalFormatError.
  static Rational parse(std::string_view text);

  /// "n" for integers, otherwise "p/q" in lowest terms with the sign on p.
  std::string str() const;

  /// Decimal rendering rounded half away from zero to `precision` digits.
  /// Display only; never feed this back into analysis.
  std::string decimal(int precision) const;

  double to_double() const { return value_.get_d(); }

  bool is_integer() const;
  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_positive() const { return sign() > 0; }
  bool is_negative() const { return sign() < 0; }

  std::string numerator_str() const { return value_.get_num().get_str(); }
  std::string denominator_str() const { return value_.get_den().get_str(); }

  Rational operator-() const;
  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  /// Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  explicit Rational(mpq_class value) : value_(std::move(value)) {}

  mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }
inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}
inline const Rational& min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}

}  // namespace imitation
