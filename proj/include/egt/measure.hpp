#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "egt/error.hpp"
#include "egt/rational.hpp"

namespace egt {

// Finite-support probability measure with exact weights over a canonically
// ordered point universe P. Entries are kept in normal form: support sorted
// by Cmp, no duplicates, every weight strictly positive, weights summing to
// exactly 1. Two measures are equal iff their normal forms are identical.
template <class P, class Cmp = std::less<P>>
class FiniteMeasure {
 public:
  using Point = P;
  using Entry = std::pair<P, Rational>;

  FiniteMeasure() = default;  // empty; not a probability measure until filled

  static FiniteMeasure dirac(P p) {
    FiniteMeasure m;
    m.entries_.emplace_back(std::move(p), Rational(1));
    return m;
  }

  // Strict constructor: rejects duplicate support points, nonpositive
  // weights, and weights not summing to 1.
  static FiniteMeasure from_entries(std::vector<Entry> entries, Cmp cmp = {}) {
    std::stable_sort(entries.begin(), entries.end(),
                     [&](const Entry& a, const Entry& b) { return cmp(a.first, b.first); });
    Rational sum = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!(entries[i].second > Rational(0))) throw Error("malformed measure: nonpositive weight");
      if (i > 0 && !cmp(entries[i - 1].first, entries[i].first))
        throw Error("malformed measure: duplicate support point");
      sum += entries[i].second;
    }
    if (sum != Rational(1)) throw Error("malformed measure: weights sum to " + sum.str());
    FiniteMeasure m;
    m.entries_ = std::move(entries);
    return m;
  }

  // Collecting constructor: merges weights of colliding points (the image of
  // a pushforward may collide), then validates the normal form.
  static FiniteMeasure collect(std::vector<Entry> entries, Cmp cmp = {}) {
    std::stable_sort(entries.begin(), entries.end(),
                     [&](const Entry& a, const Entry& b) { return cmp(a.first, b.first); });
    std::vector<Entry> merged;
    for (auto& e : entries) {
      if (!merged.empty() && !cmp(merged.back().first, e.first))
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    return from_entries(std::move(merged), cmp);
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Rational weight_of(const P& p, Cmp cmp = {}) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [&](const Entry& e, const P& q) { return cmp(e.first, q); });
    if (it != entries_.end() && !cmp(p, it->first)) return it->second;
    return Rational(0);
  }

  // support(m) contained in the given sorted point set; this is the finite
  // rendering of "the set has measure one".
  bool concentrated_on(const std::vector<P>& sorted_set, Cmp cmp = {}) const {
    for (const auto& e : entries_) {
      auto it = std::lower_bound(sorted_set.begin(), sorted_set.end(), e.first, cmp);
      if (it == sorted_set.end() || cmp(e.first, *it)) return false;
    }
    return true;
  }

 private:
  std::vector<Entry> entries_;
};

// Three-way comparison of normal forms: lexicographic over (point, weight)
// entry lists, shorter list first on a tie.
template <class P, class Cmp>
int compare_measures(const FiniteMeasure<P, Cmp>& a, const FiniteMeasure<P, Cmp>& b,
                     Cmp cmp = {}) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t n = std::min(ea.size(), eb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (cmp(ea[i].first, eb[i].first)) return -1;
    if (cmp(eb[i].first, ea[i].first)) return 1;
    if (ea[i].second != eb[i].second) return ea[i].second < eb[i].second ? -1 : 1;
  }
  if (ea.size() != eb.size()) return ea.size() < eb.size() ? -1 : 1;
  return 0;
}

template <class P, class Cmp>
bool same_measure(const FiniteMeasure<P, Cmp>& a, const FiniteMeasure<P, Cmp>& b, Cmp cmp = {}) {
  return compare_measures(a, b, cmp) == 0;
}

// Pushforward along f; colliding images merge by weight addition.
template <class Q, class CmpQ = std::less<Q>, class P, class Cmp, class F>
FiniteMeasure<Q, CmpQ> pushforward(const FiniteMeasure<P, Cmp>& m, F&& f, CmpQ cmp_q = {}) {
  std::vector<typename FiniteMeasure<Q, CmpQ>::Entry> out;
  out.reserve(m.entries().size());
  for (const auto& [p, w] : m.entries()) out.emplace_back(f(p), w);
  return FiniteMeasure<Q, CmpQ>::collect(std::move(out), cmp_q);
}

// Lexicographic order on pairs, for measures over product spaces.
template <class X, class Y, class CmpX = std::less<X>, class CmpY = std::less<Y>>
struct PairLess {
  CmpX cx{};
  CmpY cy{};
  bool operator()(const std::pair<X, Y>& a, const std::pair<X, Y>& b) const {
    if (cx(a.first, b.first)) return true;
    if (cx(b.first, a.first)) return false;
    return cy(a.second, b.second);
  }
};

// Marginals of a measure over pairs, by fiber-summing one component.
template <class A, class B, class CmpA = std::less<A>, class CmpB = std::less<B>, class CmpPair>
FiniteMeasure<A, CmpA> marginal_first(const FiniteMeasure<std::pair<A, B>, CmpPair>& m,
                                      CmpA cmp = {}) {
  return pushforward<A, CmpA>(m, [](const std::pair<A, B>& p) { return p.first; }, cmp);
}

template <class A, class B, class CmpA = std::less<A>, class CmpB = std::less<B>, class CmpPair>
FiniteMeasure<B, CmpB> marginal_second(const FiniteMeasure<std::pair<A, B>, CmpPair>& m,
                                       CmpB cmp = {}) {
  return pushforward<B, CmpB>(m, [](const std::pair<A, B>& p) { return p.second; }, cmp);
}

// Exact convex mixture alpha*a + (1-alpha)*b; requires 0 < alpha < 1 unless
// the trivial endpoints are requested.
template <class P, class Cmp>
FiniteMeasure<P, Cmp> mix(const Rational& alpha, const FiniteMeasure<P, Cmp>& a,
                          const FiniteMeasure<P, Cmp>& b, Cmp cmp = {}) {
  if (alpha < Rational(0) || alpha > Rational(1)) throw Error("mixture weight outside [0, 1]");
  if (alpha == Rational(1)) return a;
  if (alpha == Rational(0)) return b;
  std::vector<typename FiniteMeasure<P, Cmp>::Entry> out;
  for (const auto& [p, w] : a.entries()) out.emplace_back(p, alpha * w);
  Rational beta = Rational(1) - alpha;
  for (const auto& [p, w] : b.entries()) out.emplace_back(p, beta * w);
  return FiniteMeasure<P, Cmp>::collect(std::move(out), cmp);
}

}  // namespace egt
