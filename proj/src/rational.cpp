#include "persuasion/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace persuasion {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) +
                                "'");
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) +
                                "'");
  }
  cpp_int value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed rational '" +
                                  std::string(whole) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return negative ? cpp_int(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  value_ = Backend(cpp_int(numerator), cpp_int(denominator));
}

Rational Rational::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) {
    return Rational(Backend(parse_integer(t, text)));
  }
  cpp_int num = parse_integer(trim(t.substr(0, slash)), text);
  cpp_int den = parse_integer(trim(t.substr(slash + 1)), text);
  if (den == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) +
                                "'");
  }
  return Rational(Backend(num, den));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_ == 0) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

bool Rational::is_integer() const {
  return boost::multiprecision::denominator(value_) == 1;
}

std::string Rational::numerator_str() const {
  return boost::multiprecision::numerator(value_).str();
}

std::string Rational::denominator_str() const {
  return boost::multiprecision::denominator(value_).str();
}

std::string Rational::str() const {
  if (is_integer()) return numerator_str();
  return numerator_str() + "/" + denominator_str();
}

double Rational::to_double() const { return value_.convert_to<double>(); }

Rational binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return Rational(0);
  r = std::min(r, n - r);
  cpp_int acc = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    acc *= (n - r + i);
    acc /= i;
  }
  return Rational(Rational::Backend(acc));
}

std::string Slope::str() const { return neg_inf_ ? "-inf" : value_.str(); }

Slope Slope::parse(std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "-inf") return neg_infinity();
  return Slope(Rational::parse(t));
}

double Slope::to_double() const {
  return neg_inf_ ? -std::numeric_limits<double>::infinity()
                  : value_.to_double();
}

}  // namespace persuasion
