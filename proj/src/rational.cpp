#include "imitation/rational.hpp"

#include <algorithm>
#include <climits>
#include <cctype>
#include <ostream>
#include <stdexcept>

namespace imitation {
namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

mpz_class parse_integer(std::string_view s) {
  std::string digits(s);
  if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
  return mpz_class(digits, 10);
}

}  // namespace

Rational::Rational(std::int64_t value) {
  // mpq_class has no int64 constructor on every platform; go through a string
  // only when the value does not fit in a long.
  if (value >= static_cast<std::int64_t>(LONG_MIN) &&
      value <= static_cast<std::int64_t>(LONG_MAX)) {
    value_ = mpq_class(static_cast<long>(value));
  } else {
    value_ = mpq_class(mpz_class(std::to_string(value), 10));
  }
}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("rational: zero denominator");
  value_ = Rational(numerator).value_ / Rational(denominator).value_;
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_literal(text)) {
      throw RationalFormatError("not a rational: \"" + std::string(text) +
                                "\"");
    }
    return Rational(mpq_class(parse_integer(text)));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) ||
      den[0] == '-' || den[0] == '+') {
    throw RationalFormatError("not a rational: \"" + std::string(text) + "\"");
  }
  mpz_class d = parse_integer(den);
  if (d == 0) {
    throw RationalFormatError("zero denominator: \"" + std::string(text) +
                              "\"");
  }
  mpq_class q(parse_integer(num), d);
  q.canonicalize();
  return Rational(std::move(q));
}

std::string Rational::str() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(int precision) const {
  precision = std::max(precision, 0);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(precision));
  mpz_class num = abs(value_.get_num()) * scale;
  const mpz_class& den = value_.get_den();
  mpz_class q = num / den;
  mpz_class r = num - q * den;
  if (2 * r >= den) q += 1;

  std::string digits = q.get_str();
  if (precision > 0) {
    if (digits.size() <= static_cast<std::size_t>(precision)) {
      digits.insert(0, static_cast<std::size_t>(precision) + 1 - digits.size(),
                    '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(precision), ".");
  }
  const bool negative = sign() < 0 && q != 0;
  return negative ? "-" + digits : digits;
}

bool Rational::is_integer() const { return value_.get_den() == 1; }

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational& Rational::operator+=(const Rational& other) {
  value_ += other.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& other) {
  value_ -= other.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& other) {
  value_ *= other.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.is_zero()) throw std::domain_error("rational: division by zero");
  value_ /= other.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace imitation
