#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "egt/error.hpp"

namespace egt {

// Ordinals below w^5 in Cantor normal form: a list of natural coefficients
// (c_k, ..., c_1, c_0) standing for c_k*w^k + ... + c_1*w + c_0. Comparison is
// lexicographic on padded coefficient lists, which is the ordinal order.
// Degree is capped at 4; the elimination machinery only ever needs w*k labels
// plus headroom.
class Ordinal {
 public:
  static constexpr int kMaxDegree = 4;

  Ordinal() = default;  // zero: empty coefficient list

  static Ordinal natural(std::uint64_t n) {
    Ordinal o;
    if (n > 0) o.coeffs_ = {n};
    return o;
  }

  // coeff * w^degree
  static Ordinal omega(std::uint64_t coeff = 1, int degree = 1) {
    if (degree < 0 || degree > kMaxDegree) throw Error("ordinal degree out of range");
    Ordinal o;
    if (coeff > 0) {
      o.coeffs_.assign(static_cast<std::size_t>(degree) + 1, 0);
      o.coeffs_[0] = coeff;
    }
    return o;
  }

  // w*c + n, the shape used for ranked-game stage labels.
  static Ordinal omega_times_plus(std::uint64_t c, std::uint64_t n) {
    Ordinal o;
    if (c > 0) o.coeffs_ = {c, n};
    else if (n > 0) o.coeffs_ = {n};
    return o;
  }

  // Big-endian coefficients (c_k first). Leading zeros are stripped.
  static Ordinal from_coeffs(std::vector<std::uint64_t> big_endian) {
    std::size_t lead = 0;
    while (lead < big_endian.size() && big_endian[lead] == 0) ++lead;
    big_endian.erase(big_endian.begin(), big_endian.begin() + static_cast<long>(lead));
    if (big_endian.size() > kMaxDegree + 1) throw Error("ordinal degree out of range");
    Ordinal o;
    o.coeffs_ = std::move(big_endian);
    return o;
  }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
  bool is_finite() const { return coeffs_.size() <= 1; }
  std::uint64_t finite_part() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  bool is_limit() const { return !coeffs_.empty() && coeffs_.back() == 0; }
  bool is_successor() const { return !coeffs_.empty() && coeffs_.back() != 0; }

  // Coefficient of w^d.
  std::uint64_t coeff(int d) const {
    if (coeffs_.empty() || d < 0 || d > degree()) return 0;
    return coeffs_[coeffs_.size() - 1 - static_cast<std::size_t>(d)];
  }

  Ordinal successor() const {
    Ordinal o = *this;
    if (o.coeffs_.empty()) o.coeffs_ = {1};
    else o.coeffs_.back() += 1;
    return o;
  }

  Ordinal plus_finite(std::uint64_t k) const {
    Ordinal o = *this;
    if (k == 0) return o;
    if (o.coeffs_.empty()) o.coeffs_ = {k};
    else o.coeffs_.back() += k;
    return o;
  }

  // -1, 0, 1 for <, =, >.
  static int cmp(const Ordinal& a, const Ordinal& b) {
    if (a.coeffs_.size() != b.coeffs_.size())
      return a.coeffs_.size() < b.coeffs_.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      if (a.coeffs_[i] != b.coeffs_[i]) return a.coeffs_[i] < b.coeffs_[i] ? -1 : 1;
    return 0;
  }

  friend bool operator==(const Ordinal& a, const Ordinal& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Ordinal& a, const Ordinal& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Ordinal& a, const Ordinal& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Ordinal& a, const Ordinal& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Ordinal& a, const Ordinal& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Ordinal& a, const Ordinal& b) { return cmp(a, b) >= 0; }

  // Text form: "w^2*a+w*b+c" with zero terms omitted, "0" for zero.
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    int d = degree();
    for (std::size_t i = 0; i < coeffs_.size(); ++i, --d) {
      std::uint64_t c = coeffs_[i];
      if (c == 0) continue;
      if (!out.empty()) out += "+";
      if (d == 0) out += std::to_string(c);
      else if (d == 1) out += "w*" + std::to_string(c);
      else out += "w^" + std::to_string(d) + "*" + std::to_string(c);
    }
    return out;
  }

  // Accepts the emitted form plus the shorthands "w" and "w^2" for
  // coefficient-1 terms.
  static Ordinal parse(std::string_view text) {
    auto bad = [&] { return Error("invalid ordinal '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    if (text == "0") return Ordinal();
    std::vector<std::uint64_t> coeffs(kMaxDegree + 1, 0);  // big-endian
    std::size_t pos = 0;
    bool seen_term = false;
    int prev_degree = kMaxDegree + 1;
    while (pos < text.size()) {
      if (seen_term) {
        if (text[pos] != '+') throw bad();
        ++pos;
      }
      std::size_t end = text.find('+', pos);
      std::string_view term = text.substr(pos, end == std::string_view::npos ? end : end - pos);
      pos = end == std::string_view::npos ? text.size() : end;
      if (term.empty()) throw bad();
      int deg = 0;
      std::string_view body = term;
      if (body[0] == 'w') {
        deg = 1;
        body.remove_prefix(1);
        if (!body.empty() && body[0] == '^') {
          body.remove_prefix(1);
          std::size_t star = body.find('*');
          std::string_view ds = body.substr(0, star);
          deg = parse_nat_(ds, bad);
          body = star == std::string_view::npos ? std::string_view{} : body.substr(star);
        }
        if (deg < 1 || deg > kMaxDegree) throw bad();
        std::uint64_t c = 1;
        if (!body.empty()) {
          if (body[0] != '*') throw bad();
          body.remove_prefix(1);
          c = parse_nat_(body, bad);
        }
        if (c == 0) throw bad();
        coeffs[static_cast<std::size_t>(kMaxDegree - deg)] = c;
      } else {
        deg = 0;
        std::uint64_t c = parse_nat_(body, bad);
        if (c == 0) throw bad();
        coeffs[kMaxDegree] = c;
      }
      if (deg >= prev_degree) throw bad();  // terms must strictly descend
      prev_degree = deg;
      seen_term = true;
    }
    return from_coeffs(coeffs);
  }

 private:
  template <class F>
  static std::uint64_t parse_nat_(std::string_view s, F bad) {
    if (s.empty()) throw bad();
    std::uint64_t v = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') throw bad();
      v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
  }

  std::vector<std::uint64_t> coeffs_;  // big-endian, no leading zeros
};

}  // namespace egt
