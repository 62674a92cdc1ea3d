#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "egt/error.hpp"

namespace egt {

using BigInt = boost::multiprecision::cpp_int;

// Exact arbitrary-precision fraction. Always stored reduced with a positive
// denominator; arithmetic never rounds. Every payoff, probability and LP
// coefficient in the toolkit is one of these.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(const BigInt& n) : v_(n) {}
  Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error("rational with zero denominator");
    // the backend requires a positive denominator
    v_ = den < 0 ? Rat_(-num, -den) : Rat_(num, den);
  }

  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return v_.sign(); }

  Rational operator-() const { return Rational(Raw{}, -v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational reciprocal() const {
    if (is_zero()) throw Error("reciprocal of zero");
    return Rational(denominator(), numerator());
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  // Text form: "p/q" when the denominator is not 1, otherwise just "p".
  std::string str() const {
    std::string s = numerator().str();
    if (!is_integer()) s += "/" + denominator().str();
    return s;
  }

  // Accepts "p" or "p/q" with an optional leading '-' on p; q must be a
  // positive integer literal.
  static Rational parse(std::string_view text) {
    auto bad = [&] { return Error("invalid rational '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    std::size_t slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!is_int_literal_(num)) throw bad();
    if (slash == std::string_view::npos) return Rational(Raw{}, Rat_(BigInt(std::string(num))));
    std::string_view den = text.substr(slash + 1);
    if (den.empty() || den[0] == '-' || !is_int_literal_(den)) throw bad();
    BigInt d{std::string(den)};
    if (d == 0) throw bad();
    return Rational(BigInt(std::string(num)), d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  using Rat_ = boost::multiprecision::cpp_rational;
  struct Raw {};
  Rational(Raw, Rat_ v) : v_(std::move(v)) {}

  static bool is_int_literal_(std::string_view s) {
    if (!s.empty() && s[0] == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  }

  Rat_ v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace egt
