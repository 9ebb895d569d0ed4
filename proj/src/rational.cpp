#include "massey/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace massey {

namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t start = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) start = 1;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero rational");
  value_ /= o.value_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!is_integer_literal(num, true)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  std::string num_str(num);
  if (num_str[0] == '+') num_str.erase(0, 1);
  mpq_class q;
  q.get_num() = mpz_class(num_str, 10);
  if (slash == std::string_view::npos) {
    q.get_den() = 1;
  } else {
    const std::string_view den = text.substr(slash + 1);
    if (!is_integer_literal(den, false)) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    q.get_den() = mpz_class(std::string(den), 10);
    if (q.get_den() == 0) {
      throw std::invalid_argument("rational '" + std::string(text) + "' has zero denominator");
    }
  }
  q.canonicalize();
  return Rational(std::move(q));
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

}  // namespace massey
