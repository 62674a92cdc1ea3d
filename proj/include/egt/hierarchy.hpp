#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "egt/elimination.hpp"
#include "egt/error.hpp"
#include "egt/game.hpp"
#include "egt/measure.hpp"

namespace egt {

// ---------------------------------------------------------------------------
// Structured hierarchy points. A point of order n "for player i" is an
// opponent strategy together with the opponent's belief prefix of depth n:
// (t, delta_j^1, ..., delta_j^n), where delta_j^k is a measure over points of
// order k-1 for player j. Order-0 points are bare opponent strategies.
// Points are immutable and shared; deep structures reference their sub-
// measures instead of copying them.
// ---------------------------------------------------------------------------

struct HPoint;
using HPointPtr = std::shared_ptr<const HPoint>;

struct HPointLess {
  bool operator()(const HPointPtr& a, const HPointPtr& b) const;
};

using HMeasure = FiniteMeasure<HPointPtr, HPointLess>;

struct HPoint {
  int strategy = 0;               // opponent strategy index
  std::vector<HMeasure> beliefs;  // opponent prefix delta^1..delta^n

  int order() const { return static_cast<int>(beliefs.size()); }
};

inline HPointPtr make_point(int strategy, std::vector<HMeasure> beliefs = {}) {
  return std::make_shared<const HPoint>(HPoint{strategy, std::move(beliefs)});
}

namespace detail {

using CmpMemo = std::map<std::pair<const HPoint*, const HPoint*>, int>;

inline int compare_hpoint(const HPoint* a, const HPoint* b, CmpMemo& memo);

inline int compare_hmeasure(const HMeasure& x, const HMeasure& y, CmpMemo& memo) {
  const auto& ex = x.entries();
  const auto& ey = y.entries();
  std::size_t n = std::min(ex.size(), ey.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_hpoint(ex[i].first.get(), ey[i].first.get(), memo);
    if (c != 0) return c;
    if (ex[i].second != ey[i].second) return ex[i].second < ey[i].second ? -1 : 1;
  }
  if (ex.size() != ey.size()) return ex.size() < ey.size() ? -1 : 1;
  return 0;
}

// Canonical order: strategy index first, then belief prefixes compared
// level by level as measure normal forms, shorter prefix first.
inline int compare_hpoint(const HPoint* a, const HPoint* b, CmpMemo& memo) {
  if (a == b) return 0;
  auto key = std::make_pair(a, b);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  int result = 0;
  if (a->strategy != b->strategy) {
    result = a->strategy < b->strategy ? -1 : 1;
  } else {
    std::size_t n = std::min(a->beliefs.size(), b->beliefs.size());
    for (std::size_t k = 0; k < n && result == 0; ++k)
      result = compare_hmeasure(a->beliefs[k], b->beliefs[k], memo);
    if (result == 0 && a->beliefs.size() != b->beliefs.size())
      result = a->beliefs.size() < b->beliefs.size() ? -1 : 1;
  }
  memo.emplace(key, result);
  return result;
}

}  // namespace detail

inline int compare_points(const HPointPtr& a, const HPointPtr& b) {
  detail::CmpMemo memo;
  return detail::compare_hpoint(a.get(), b.get(), memo);
}

inline int compare_hmeasures(const HMeasure& a, const HMeasure& b) {
  detail::CmpMemo memo;
  return detail::compare_hmeasure(a, b, memo);
}

inline bool HPointLess::operator()(const HPointPtr& a, const HPointPtr& b) const {
  return compare_points(a, b) < 0;
}

// ---------------------------------------------------------------------------
// Hierarchies: depth-d coherent belief sequences delta^1..delta^d for one
// player, where delta^k is a measure over points of order k-1.
// ---------------------------------------------------------------------------

struct Hierarchy {
  Player player = kPlayer1;
  std::vector<HMeasure> levels;  // delta^1..delta^d

  int depth() const { return static_cast<int>(levels.size()); }
};

// Level-1 measures live on order-0 points, i.e. bare opponent strategies.
inline HMeasure level1_from_belief(const Belief& mu) {
  std::vector<HMeasure::Entry> entries;
  for (const auto& [t, w] : mu.entries()) entries.emplace_back(make_point(t), w);
  return HMeasure::from_entries(std::move(entries));
}

inline Belief belief_from_level1(const HMeasure& m) {
  std::vector<Belief::Entry> entries;
  for (const auto& [p, w] : m.entries()) {
    if (p->order() != 0) throw Error("level-1 measure carries structured points");
    entries.emplace_back(p->strategy, w);
  }
  return Belief::from_entries(std::move(entries));
}

// Drop belief levels above `order` (the projection used by the marginal
// chain). Shares the retained sub-measures.
inline HPointPtr truncate_point(const HPointPtr& p, int order) {
  if (p->order() == order) return p;
  if (p->order() < order) throw Error("cannot truncate a point upward");
  return make_point(p->strategy,
                    std::vector<HMeasure>(p->beliefs.begin(), p->beliefs.begin() + order));
}

// Marginal of a level-k measure onto the order-(k-2) point space.
inline HMeasure level_marginal(const HMeasure& m) {
  std::vector<HMeasure::Entry> entries;
  for (const auto& [p, w] : m.entries()) {
    if (p->order() < 1) throw Error("level marginal of an order-0 measure");
    entries.emplace_back(truncate_point(p, p->order() - 1), w);
  }
  return HMeasure::collect(std::move(entries));
}

// Shape validation with a path for diagnostics: strategy indices in range and
// every level living on points of the right order for the right player.
namespace detail {

inline void validate_point_shape(const Game& g, Player owner, const HPointPtr& p, int order,
                                 const std::string& path);

inline void validate_level_shape(const Game& g, Player owner, const HMeasure& m, int point_order,
                                 const std::string& path) {
  for (const auto& [p, w] : m.entries()) {
    (void)w;
    validate_point_shape(g, owner, p, point_order, path);
  }
}

inline void validate_point_shape(const Game& g, Player owner, const HPointPtr& p, int order,
                                 const std::string& path) {
  Player j = other(owner);
  if (p->strategy < 0 || p->strategy >= g.n_strategies(j))
    throw Error(path + ": point strategy index " + std::to_string(p->strategy) +
                " outside player " + std::to_string(j + 1) + "'s list");
  if (p->order() != order)
    throw Error(path + ": point has order " + std::to_string(p->order()) + ", expected " +
                std::to_string(order));
  for (int k = 0; k < order; ++k)
    validate_level_shape(g, j, p->beliefs[static_cast<std::size_t>(k)], k,
                         path + "/point(" + std::to_string(p->strategy) + ").level" +
                             std::to_string(k + 1));
}

}  // namespace detail

inline void validate_hierarchy_shape(const Game& g, const Hierarchy& h) {
  for (int k = 1; k <= h.depth(); ++k)
    detail::validate_level_shape(g, h.player, h.levels[static_cast<std::size_t>(k - 1)], k - 1,
                                 "level" + std::to_string(k));
}

// Coherence of the top-level sequence: the marginal of delta^k onto the
// order-(k-2) space is exactly delta^{k-1}.
inline bool check_coherent(const Hierarchy& h) {
  for (int k = 2; k <= h.depth(); ++k)
    if (compare_hmeasures(level_marginal(h.levels[static_cast<std::size_t>(k - 1)]),
                          h.levels[static_cast<std::size_t>(k - 2)]) != 0)
      return false;
  return true;
}

namespace detail {

inline bool point_prefix_coherent(const HPoint* p, std::set<const HPoint*>& ok_points);

inline bool measure_hereditarily_coherent(const HMeasure& m, std::set<const HPoint*>& ok_points) {
  for (const auto& [p, w] : m.entries()) {
    (void)w;
    if (!point_prefix_coherent(p.get(), ok_points)) return false;
  }
  return true;
}

inline bool point_prefix_coherent(const HPoint* p, std::set<const HPoint*>& ok_points) {
  if (ok_points.count(p)) return true;
  for (std::size_t k = 1; k < p->beliefs.size(); ++k)
    if (compare_hmeasures(level_marginal(p->beliefs[k]), p->beliefs[k - 1]) != 0) return false;
  for (const auto& level : p->beliefs)
    if (!measure_hereditarily_coherent(level, ok_points)) return false;
  ok_points.insert(p);
  return true;
}

}  // namespace detail

// Hereditary coherence: the top-level chain coheres and every support point,
// recursively, is a coherent sequence of hereditarily coherent measures.
inline bool check_hereditarily_coherent(const Hierarchy& h) {
  if (!check_coherent(h)) return false;
  std::set<const HPoint*> ok;
  for (const auto& level : h.levels)
    if (!detail::measure_hereditarily_coherent(level, ok)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Local RCBR membership. Level 1 requires (s, delta^1) to satisfy the
// relation (for games: best response among all alternatives); level n
// additionally requires every support point of delta^n to pass at n-1.
// ---------------------------------------------------------------------------

// Either a finite game (best-response relation) or an explicit polyhedral
// relation can ground the level-1 test.
using RcbrSource = std::variant<const Game*, const PolyhedralRelation*>;

namespace detail {

inline bool rcbr_level1(const RcbrSource& src, Player p, int s, const Belief& mu) {
  if (std::holds_alternative<const Game*>(src)) {
    const Game& g = *std::get<const Game*>(src);
    return is_best_response(g, p, s, mu, g.all_indices(p));
  }
  const PolyhedralRelation& rel = *std::get<const PolyhedralRelation*>(src);
  return rel.contains(p, s, mu);
}

struct RcbrMemo {
  std::map<std::tuple<const HPoint*, int>, bool> by_point;  // (point, n) for its embedded prefix
};

// Prefix check over an explicit level list (used both for the top-level
// hierarchy and for the prefixes embedded in support points).
inline bool rcbr_star_levels(const RcbrSource& src, Player p, int s,
                             const std::vector<HMeasure>& levels, int n, RcbrMemo& memo) {
  if (n < 1 || n > static_cast<int>(levels.size()))
    throw Error("rcbr check depth exceeds the available levels");
  if (!rcbr_level1(src, p, s, belief_from_level1(levels[0]))) return false;
  for (int k = 2; k <= n; ++k) {
    for (const auto& [pt, w] : levels[static_cast<std::size_t>(k - 1)].entries()) {
      (void)w;
      auto key = std::make_tuple(pt.get(), k - 1);
      auto it = memo.by_point.find(key);
      bool ok;
      if (it != memo.by_point.end()) {
        ok = it->second;
      } else {
        ok = rcbr_star_levels(src, other(p), pt->strategy, pt->beliefs, k - 1, memo);
        memo.by_point.emplace(key, ok);
      }
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace detail

inline bool check_rcbr_star(const RcbrSource& src, Player p, int s, const Hierarchy& h, int n) {
  if (h.player != p) throw Error("hierarchy belongs to the other player");
  if (n > h.depth()) throw Error("rcbr level exceeds hierarchy depth");
  if (!check_hereditarily_coherent(h)) throw Error("hierarchy is not hereditarily coherent");
  detail::RcbrMemo memo;
  return detail::rcbr_star_levels(src, p, s, h.levels, n, memo);
}

inline bool check_rcbr_star(const Game& g, Player p, int s, const Hierarchy& h, int n) {
  return check_rcbr_star(RcbrSource{&g}, p, s, h, n);
}

// ---------------------------------------------------------------------------
// Constructive witnesses: the canonical justifying-belief map against the
// final survivor rectangle, lifted to depth-d hierarchies by pushing each
// belief forward along the opponent's already-built prefix map.
// ---------------------------------------------------------------------------

struct WitnessEntry {
  Player player = kPlayer1;
  int strategy = 0;
  Belief belief;        // canonical justifying belief mu^i(s)
  Hierarchy hierarchy;  // depth-d lift t^i(s)
};

struct WitnessMap {
  std::vector<WitnessEntry> entries;

  const WitnessEntry* find(Player p, int s) const {
    for (const auto& e : entries)
      if (e.player == p && e.strategy == s) return &e;
    return nullptr;
  }
  bool empty() const { return entries.empty(); }
};

namespace detail {

struct WitnessBuilder {
  // survivors[p] and per-survivor canonical beliefs
  std::array<std::vector<int>, 2> survivors;
  std::array<std::map<int, Belief>, 2> beliefs;
  // levels[p][s][k-1] = delta_p^k(s)
  std::array<std::map<int, std::vector<HMeasure>>, 2> levels;
  // shared structured points (t, delta_j^1(t)..delta_j^k(t))
  std::array<std::map<std::pair<int, int>, HPointPtr>, 2> point_cache;  // keyed by (t, order)

  HPointPtr point_for(Player owner_of_t, int t, int order) {
    auto key = std::make_pair(t, order);
    auto& cache = point_cache[static_cast<std::size_t>(owner_of_t)];
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<HMeasure> prefix;
    if (order > 0) {
      const auto& lv = levels[static_cast<std::size_t>(owner_of_t)].at(t);
      prefix.assign(lv.begin(), lv.begin() + order);
    }
    auto p = make_point(t, std::move(prefix));
    cache.emplace(key, p);
    return p;
  }
};

}  // namespace detail

// Builds the witness map from a converged trace: for each survivor s of
// player i, delta^1(s) is the canonical justifying belief against the final
// rectangle and delta^{k+1}(s) is its pushforward along
// t -> (t, delta_j^1(t), ..., delta_j^k(t)). Every support point of a built
// level is by construction a graph point of the opponent's witness map.
inline WitnessMap build_witness(const RcbrSource& src, const EliminationTrace& trace, int depth) {
  if (depth < 1) throw Error("witness depth must be >= 1");
  WitnessMap out;
  if (trace.final_rectangle.sides[0].empty() && trace.final_rectangle.sides[1].empty())
    return out;  // nothing to witness

  detail::WitnessBuilder b;
  for (Player p : {kPlayer1, kPlayer2}) {
    b.survivors[static_cast<std::size_t>(p)] = trace.final_rectangle.sides[static_cast<std::size_t>(p)];
    const auto& opp = trace.final_rectangle.sides[static_cast<std::size_t>(other(p))];
    for (int s : b.survivors[static_cast<std::size_t>(p)]) {
      std::optional<Belief> mu;
      if (std::holds_alternative<const Game*>(src)) {
        const Game& g = *std::get<const Game*>(src);
        mu = find_justifying_belief(g, p, s, opp, g.all_indices(p));
      } else {
        mu = relation_justifier(*std::get<const PolyhedralRelation*>(src), p, s, opp);
      }
      if (!mu) throw Error("final-rectangle strategy lacks a justifying belief");
      b.beliefs[static_cast<std::size_t>(p)].emplace(s, *mu);
      b.levels[static_cast<std::size_t>(p)][s].push_back(level1_from_belief(*mu));
    }
  }
  for (int k = 2; k <= depth; ++k) {
    for (Player p : {kPlayer1, kPlayer2}) {
      Player j = other(p);
      for (int s : b.survivors[static_cast<std::size_t>(p)]) {
        const Belief& mu = b.beliefs[static_cast<std::size_t>(p)].at(s);
        std::vector<HMeasure::Entry> entries;
        for (const auto& [t, w] : mu.entries())
          entries.emplace_back(b.point_for(j, t, k - 1), w);
        b.levels[static_cast<std::size_t>(p)][s].push_back(HMeasure::collect(std::move(entries)));
      }
    }
  }
  for (Player p : {kPlayer1, kPlayer2})
    for (int s : b.survivors[static_cast<std::size_t>(p)])
      out.entries.push_back({p, s, b.beliefs[static_cast<std::size_t>(p)].at(s),
                             Hierarchy{p, b.levels[static_cast<std::size_t>(p)].at(s)}});
  return out;
}

inline WitnessMap build_witness(const Game& g, const EliminationTrace& trace, int depth) {
  return build_witness(RcbrSource{&g}, trace, depth);
}

// ---------------------------------------------------------------------------
// Lubin lift at desk scale: uniformise a finite relation by the least fiber
// element and push the measure through the graph map.
// ---------------------------------------------------------------------------

// nu = pushforward of mu under x -> (x, f(x)) with f(x) the least y related
// to x. Requires support(mu) inside proj_X(relation); the marginal of the
// result onto X is mu and the result concentrates on the relation.
template <class X, class Y, class CmpX = std::less<X>, class CmpY = std::less<Y>>
FiniteMeasure<std::pair<X, Y>, PairLess<X, Y, CmpX, CmpY>> lubin_lift(
    const std::vector<std::pair<X, Y>>& relation, const FiniteMeasure<X, CmpX>& mu,
    CmpX cx = {}, CmpY cy = {}) {
  using Out = FiniteMeasure<std::pair<X, Y>, PairLess<X, Y, CmpX, CmpY>>;
  std::vector<typename Out::Entry> entries;
  for (const auto& [x, w] : mu.entries()) {
    std::optional<Y> least;
    for (const auto& [rx, ry] : relation) {
      if (cx(rx, x) || cx(x, rx)) continue;
      if (!least || cy(ry, *least)) least = ry;
    }
    if (!least) throw Error("lubin_lift: support point has an empty fiber");
    entries.emplace_back(std::make_pair(x, *least), w);
  }
  return Out::collect(std::move(entries));
}

}  // namespace egt
