#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace persuasion {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
class Rational {
 public:
  using Backend = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(std::int64_t value) : value_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t numerator, std::int64_t denominator);
  explicit Rational(Backend value) : value_(std::move(value)) {}

  /// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed
  /// text or a zero denominator.
  static Rational parse(std::string_view text);

  std::string str() const;
  double to_double() const;

  bool is_zero() const { return value_ == 0; }
  bool is_integer() const;
  std::string numerator_str() const;
  std::string denominator_str() const;

  const Backend& backend() const { return value_; }

  Rational operator-() const { return Rational(Backend(-value_)); }
  Rational& operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
  }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Backend value_;
};

/// Exact binomial coefficient C(n, r); zero when r > n.
Rational binomial(std::int64_t n, std::int64_t r);

/// A slope of a line in the (receiver, sender) utility plane: either a
/// rational or the distinguished value minus infinity (a vertical line).
class Slope {
 public:
  Slope() = default;
  Slope(Rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
  static Slope neg_infinity() {
    Slope s;
    s.neg_inf_ = true;
    return s;
  }

  bool is_neg_infinity() const { return neg_inf_; }
  /// Only meaningful when !is_neg_infinity().
  const Rational& value() const { return value_; }

  /// "-inf" or the rational text.
  std::string str() const;
  static Slope parse(std::string_view text);
  double to_double() const;

  friend bool operator==(const Slope& a, const Slope& b) {
    if (a.neg_inf_ || b.neg_inf_) return a.neg_inf_ == b.neg_inf_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Slope& a, const Slope& b) {
    if (a.neg_inf_ && b.neg_inf_) return std::strong_ordering::equal;
    if (a.neg_inf_) return std::strong_ordering::less;
    if (b.neg_inf_) return std::strong_ordering::greater;
    return a.value_ <=> b.value_;
  }

 private:
  bool neg_inf_ = false;
  Rational value_;
};

}  // namespace persuasion

template <>
struct std::hash<persuasion::Rational> {
  std::size_t operator()(const persuasion::Rational& r) const {
    return std::hash<std::string>{}(r.str());
  }
};
