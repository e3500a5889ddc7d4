#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "csnn/errors.hpp"

namespace csnn {

/// Exact arbitrary-precision fraction. Every charge, potential, weight and
/// timestamp in the system is one of these; there is no rounding anywhere.
///
/// Values are kept in canonical lowest terms with a positive denominator
/// (the backing boost::multiprecision::cpp_rational maintains that form).
class Rational {
public:
  using Backend = boost::multiprecision::cpp_rational;
  using Integer = boost::multiprecision::cpp_int;

  Rational() = default;
  Rational(int value) : value_(value) {}
  Rational(long value) : value_(value) {}
  Rational(long long value) : value_(value) {}
  Rational(std::uint64_t value) : value_(value) {}
  explicit Rational(Backend value) : value_(std::move(value)) {}

  Rational(Integer num, Integer den) {
    if (den == 0) throw SnnError(ErrorCode::ParseError, "zero denominator");
    if (den < 0) { num = -num; den = -den; }
    value_ = Backend(std::move(num), std::move(den));
  }

  /// Accepts "p", "-p", or "p/q" with decimal integer p and positive integer
  /// q. Anything else -- notably float literals like "2.7" -- is rejected, so
  /// a file that parses is exact by construction.
  static Rational parse(std::string_view text);

  std::string str() const { return value_.str(); } // "p" or "p/q"

  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }

  int sign() const { return value_.sign(); }
  bool is_zero() const { return value_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }

  Rational abs() const { return value_ < 0 ? Rational(Backend(-value_)) : *this; }

  /// Largest integer <= *this, returned as a Rational.
  Rational floor() const {
    Integer num = numerator();
    Integer den = denominator();
    Integer q = num / den; // truncates toward zero
    if (num < 0 && q * den != num) --q;
    return Rational(Backend(q));
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Backend(a.value_ + b.value_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Backend(a.value_ - b.value_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Backend(a.value_ * b.value_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw SnnError(ErrorCode::InvariantViolation, "division by zero");
    return Rational(Backend(a.value_ / b.value_));
  }
  Rational operator-() const { return Rational(Backend(-value_)); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

private:
  Backend value_{};
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&] { throw SnnError(ErrorCode::ParseError, "not an exact rational: \"" + std::string(text) + "\""); };
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };

  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  bool negative = !num.empty() && num.front() == '-';
  if (negative) num.remove_prefix(1);
  if (!digits(num) || !digits(den)) fail();

  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) fail();
  if (negative) n = -n;
  return Rational(std::move(n), std::move(d));
}

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace csnn
