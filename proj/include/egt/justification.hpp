#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "egt/elimination.hpp"
#include "egt/error.hpp"
#include "egt/game.hpp"
#include "egt/hierarchy.hpp"
#include "egt/ordinal.hpp"
#include "egt/ranked.hpp"

namespace egt {

// ---------------------------------------------------------------------------
// The auxiliary two-player game defending a strategy s: player I repeatedly
// plays a belief together with a finite set carrying it, player II challenges
// with a strategy from that set, and the first player who cannot move legally
// loses. I wins by surviving the ply budget.
// ---------------------------------------------------------------------------

enum class JSide { I, II };

// Player I's half-move: a belief over the appropriate opponent strategy set
// plus the finite set b with supp(belief) inside b.
struct JMoveI {
  Belief belief;
  std::vector<int> borel_set;  // sorted strategy indices
};

struct JHalfMove {
  int ply = 0;
  JSide side = JSide::I;
  Player owner = kPlayer1;  // player whose strategy was current when moving
  int current = 0;          // that strategy
  std::optional<JMoveI> move_I;
  std::optional<int> move_II;
  std::optional<Ordinal> pick_stage;  // elimination stage of II's pick, if eliminated
  bool legal = true;
};

struct JPosition {
  Player owner = kPlayer1;  // player of the strategy currently defended
  int current = 0;
  JSide to_move = JSide::I;
  int ply = 0;
  std::optional<JMoveI> pending;  // I's move awaiting II's reply
  std::vector<JHalfMove> history;
};

// Unifies the three sources the game can run over: a finite game through its
// best-response relation, an explicit polyhedral relation, or the ranked
// integer family through its rank criterion. Construction runs the
// elimination once; strategies and referees then share the survivor data.
class JSource {
 public:
  explicit JSource(const Game& g)
      : game_(&g), trace_(eliminate(g, Concept::RAT)) {}
  explicit JSource(const PolyhedralRelation& rel)
      : relation_(&rel), trace_(rat_of_relation(rel)) {}
  explicit JSource(const RankedGame& rg) : ranked_(&rg) {
    rg.validate();
  }

  bool is_ranked() const { return ranked_ != nullptr; }
  const EliminationTrace& trace() const {
    if (ranked_) throw Error("ranked sources do not carry a finite trace");
    return trace_;
  }
  const Game* game() const { return game_; }
  const PolyhedralRelation* relation() const { return relation_; }

  int n_strategies(Player p) const {
    if (ranked_) return ranked_->horizon;
    if (game_) return game_->n_strategies(p);
    return relation_->n_strategies(p);
  }

  std::string strategy_name(Player p, int s) const {
    if (ranked_) return std::to_string(s);
    if (game_) return game_->strategy_name(p, s);
    return relation_->strategy_names[static_cast<std::size_t>(p)][static_cast<std::size_t>(s)];
  }

  // Exact membership (s, mu) in E_p.
  bool in_relation(Player p, int s, const Belief& mu) const {
    if (ranked_) {
      // Best response over the integers: every support point ranks strictly
      // below s.
      Ordinal rs = ranked_->rank(static_cast<std::uint64_t>(s));
      for (const auto& [t, w] : mu.entries()) {
        (void)w;
        if (!(ranked_->rank(static_cast<std::uint64_t>(t)) < rs)) return false;
      }
      return true;
    }
    if (game_) return is_best_response(*game_, p, s, mu, game_->all_indices(p));
    return relation_->contains(p, s, mu);
  }

  bool is_survivor(Player p, int s) const {
    if (ranked_) return false;  // elimination empties the ranked family
    return trace_.is_survivor(p, s);
  }

  std::optional<Ordinal> elimination_stage(Player p, int s) const {
    if (ranked_) return ranked_->rank(static_cast<std::uint64_t>(s)).successor();
    return trace_.elimination_stage(p, s);
  }

  // Canonical justifying belief concentrated on the final survivors, defined
  // exactly for survivors.
  std::optional<Belief> canonical_justifier(Player p, int s) const {
    if (ranked_) return std::nullopt;
    if (!trace_.is_survivor(p, s)) return std::nullopt;
    return justifier_with_support(p, s,
                                  trace_.final_rectangle.sides[static_cast<std::size_t>(other(p))]);
  }

  // Canonical justifier with support restricted to `allowed` (deterministic;
  // memoised, safe to query from parallel tournament workers).
  std::optional<Belief> justifier_with_support(Player p, int s,
                                               const std::vector<int>& allowed) const {
    if (allowed.empty()) return std::nullopt;
    auto key = std::make_tuple(p, s, allowed);
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      if (auto it = justifier_cache_.find(key); it != justifier_cache_.end()) return it->second;
    }
    std::optional<Belief> result;
    if (ranked_) {
      // Dirac at the highest-ranked allowed integer strictly below the
      // current rank (ties by least index): deterministic, and it walks the
      // descent one class at a time.
      Ordinal rs = ranked_->rank(static_cast<std::uint64_t>(s));
      std::optional<int> pick;
      for (int t : allowed) {
        Ordinal rt = ranked_->rank(static_cast<std::uint64_t>(t));
        if (!(rt < rs)) continue;
        if (!pick || ranked_->rank(static_cast<std::uint64_t>(*pick)) < rt) pick = t;
      }
      if (pick) result = Belief::dirac(*pick);
    } else if (game_) {
      result = find_justifying_belief(*game_, p, s, allowed, game_->all_indices(p));
    } else {
      result = relation_justifier(*relation_, p, s, allowed);
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    justifier_cache_.emplace(std::move(key), result);
    return result;
  }

 private:
  const Game* game_ = nullptr;
  const PolyhedralRelation* relation_ = nullptr;
  const RankedGame* ranked_ = nullptr;
  EliminationTrace trace_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::tuple<Player, int, std::vector<int>>, std::optional<Belief>>
      justifier_cache_;
};

inline JPosition initial_position(Player owner, int strategy) {
  JPosition pos;
  pos.owner = owner;
  pos.current = strategy;
  return pos;
}

// Feasible-move description for player I at a position: the belief polyhedron
// constraining mu, with the note that b may be any superset of supp(mu).
struct LegalMovesI {
  std::optional<LinearSystem> polyhedron;  // absent for ranked sources
  std::string description;
};

inline LegalMovesI legal_moves_I(const JSource& src, const JPosition& pos) {
  if (pos.to_move != JSide::I) throw Error("not player I's turn");
  LegalMovesI out;
  std::ostringstream desc;
  desc << "play (mu, b) with (" << src.strategy_name(pos.owner, pos.current)
       << ", mu) in the relation and supp(mu) within b";
  if (src.is_ranked()) {
    desc << "; mu must concentrate on integers of strictly smaller rank";
  } else if (src.game()) {
    out.polyhedron = belief_polyhedron(*src.game(), pos.owner, pos.current,
                                       src.game()->all_indices(other(pos.owner)),
                                       src.game()->all_indices(pos.owner))
                         .system;
  } else if (src.relation()) {
    out.polyhedron = src.relation()
                         ->systems[static_cast<std::size_t>(pos.owner)]
                                  [static_cast<std::size_t>(pos.current)];
  }
  out.description = desc.str();
  return out;
}

inline std::vector<int> legal_moves_II(const JSource& src, const JPosition& pos) {
  (void)src;
  if (pos.to_move != JSide::II) throw Error("not player II's turn");
  if (!pos.pending) throw Error("no pending move for player II to answer");
  return pos.pending->borel_set;
}

// Strategy objects. A stationary strategy's move depends only on the current
// strategy, which lets hierarchy extraction memoise residuals.
struct StrategyI {
  std::string name;
  bool stationary = false;
  std::function<std::optional<JMoveI>(const JPosition&)> move;
};

struct StrategyII {
  std::string name;
  std::function<std::optional<int>(const JPosition&)> move;
};

// Winning strategy for I at a survivor: perpetually play the canonical
// justifying belief against the final rectangle, with b its support. Every
// reachable challenge stays inside the survivor set, so the move is always
// defined.
inline StrategyI synthesize_I(const JSource& src, Player owner, int strategy) {
  if (!src.is_survivor(owner, strategy))
    throw Error("synthesize_I: strategy is not a survivor");
  StrategyI strat;
  strat.name = "synthesized-I";
  strat.stationary = true;
  strat.move = [&src](const JPosition& pos) -> std::optional<JMoveI> {
    auto mu = src.canonical_justifier(pos.owner, pos.current);
    if (!mu) return std::nullopt;
    std::vector<int> b;
    for (const auto& [t, w] : mu->entries()) {
      (void)w;
      b.push_back(t);
    }
    return JMoveI{*mu, std::move(b)};
  };
  return strat;
}

// Best-effort total strategy for I: the canonical justifier when current is a
// survivor, otherwise any justifier over the full opponent set (for ranked
// sources this is a Dirac just below the current rank), otherwise stuck.
inline StrategyI fallback_I(const JSource& src) {
  StrategyI strat;
  strat.name = "fallback-I";
  strat.stationary = true;
  strat.move = [&src](const JPosition& pos) -> std::optional<JMoveI> {
    std::optional<Belief> mu = src.canonical_justifier(pos.owner, pos.current);
    if (!mu) {
      std::vector<int> full(static_cast<std::size_t>(src.n_strategies(other(pos.owner))));
      std::iota(full.begin(), full.end(), 0);
      mu = src.justifier_with_support(pos.owner, pos.current, full);
    }
    if (!mu) return std::nullopt;
    std::vector<int> b;
    for (const auto& [t, w] : mu->entries()) {
      (void)w;
      b.push_back(t);
    }
    return JMoveI{*mu, std::move(b)};
  };
  return strat;
}

// Winning strategy for II against eliminated strategies: from I's (mu, b)
// pick the element of b with the minimal elimination stage (ties broken by
// canonical strategy order). The picked stages strictly decrease, so I runs
// out of legal moves within finitely many plies.
inline StrategyII synthesize_II(const JSource& src) {
  StrategyII strat;
  strat.name = "synthesized-II";
  strat.move = [&src](const JPosition& pos) -> std::optional<int> {
    if (!pos.pending) return std::nullopt;
    Player challenged = other(pos.owner);
    std::optional<int> best;
    std::optional<Ordinal> best_stage;
    for (int t : pos.pending->borel_set) {
      auto stage = src.elimination_stage(challenged, t);
      if (!stage) continue;  // survivor: never preferred over an eliminated pick
      if (!best || *stage < *best_stage) {
        best = t;
        best_stage = stage;
      }
    }
    if (best) return best;
    // Everything offered survives; challenge canonically with the first.
    if (pos.pending->borel_set.empty()) return std::nullopt;
    return pos.pending->borel_set.front();
  };
  return strat;
}

// Seeded random opponents for tournament testing. Random-legal I draws a
// random support set, asks for a justifier over it, and falls back to the
// full set; random-legal II picks uniformly from b.
inline StrategyI random_legal_I(const JSource& src, std::uint64_t seed) {
  StrategyI strat;
  strat.name = "random-I";
  strat.stationary = false;
  auto rng = std::make_shared<std::mt19937_64>(seed);
  strat.move = [&src, rng](const JPosition& pos) -> std::optional<JMoveI> {
    int n = src.n_strategies(other(pos.owner));
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::vector<int> subset;
      for (int t = 0; t < n; ++t)
        if ((*rng)() & 1) subset.push_back(t);
      if (subset.empty()) subset.push_back(static_cast<int>((*rng)() % static_cast<std::uint64_t>(n)));
      if (auto mu = src.justifier_with_support(pos.owner, pos.current, subset)) {
        // Sometimes advertise the whole sampled set rather than the tight
        // support, exercising II's choice among legal challenges.
        std::vector<int> b;
        if ((*rng)() & 1) {
          b = subset;
        } else {
          for (const auto& [t, w] : mu->entries()) {
            (void)w;
            b.push_back(t);
          }
        }
        return JMoveI{*mu, std::move(b)};
      }
    }
    std::vector<int> full(static_cast<std::size_t>(n));
    std::iota(full.begin(), full.end(), 0);
    if (auto mu = src.justifier_with_support(pos.owner, pos.current, full)) {
      std::vector<int> b;
      for (const auto& [t, w] : mu->entries()) {
        (void)w;
        b.push_back(t);
      }
      return JMoveI{*mu, std::move(b)};
    }
    return std::nullopt;
  };
  return strat;
}

inline StrategyII random_legal_II(std::uint64_t seed) {
  StrategyII strat;
  strat.name = "random-II";
  auto rng = std::make_shared<std::mt19937_64>(seed);
  strat.move = [rng](const JPosition& pos) -> std::optional<int> {
    if (!pos.pending || pos.pending->borel_set.empty()) return std::nullopt;
    const auto& b = pos.pending->borel_set;
    return b[static_cast<std::size_t>((*rng)() % b.size())];
  };
  return strat;
}

struct PlayRecord {
  Player initial_owner = kPlayer1;
  int initial_strategy = 0;
  int ply_budget = 0;
  std::vector<JHalfMove> transcript;
  JSide winner = JSide::I;
  std::string reason;
  bool budget_exhausted = false;
  bool audit_clean = true;  // all recorded moves were legal when played
};

// Referee: runs the two strategies against each other, re-checking every move
// against the legality rules; the first rule breaker (or stuck player) loses,
// and I wins by surviving the ply budget.
inline PlayRecord play(const JSource& src, Player owner, int strategy, const StrategyI& strat_I,
                       const StrategyII& strat_II, int max_plies) {
  PlayRecord rec;
  rec.initial_owner = owner;
  rec.initial_strategy = strategy;
  rec.ply_budget = max_plies;

  JPosition pos = initial_position(owner, strategy);
  while (pos.ply < max_plies) {
    if (pos.to_move == JSide::I) {
      auto mv = strat_I.move ? strat_I.move(pos) : std::nullopt;
      if (!mv) {
        rec.winner = JSide::II;
        rec.reason = "player I has no move at ply " + std::to_string(pos.ply);
        return rec;
      }
      JHalfMove half;
      half.ply = pos.ply;
      half.side = JSide::I;
      half.owner = pos.owner;
      half.current = pos.current;
      half.move_I = mv;
      bool legal = src.in_relation(pos.owner, pos.current, mv->belief);
      int opp_n = src.n_strategies(other(pos.owner));
      for (int t : mv->borel_set)
        if (t < 0 || t >= opp_n) legal = false;
      if (legal && !mv->belief.concentrated_on(mv->borel_set)) legal = false;
      half.legal = legal;
      rec.transcript.push_back(half);
      pos.history.push_back(half);
      if (!legal) {
        rec.winner = JSide::II;
        rec.reason = "illegal move by I at ply " + std::to_string(pos.ply);
        rec.audit_clean = false;
        return rec;
      }
      pos.pending = mv;
      pos.to_move = JSide::II;
      ++pos.ply;
    } else {
      auto t = strat_II.move ? strat_II.move(pos) : std::nullopt;
      if (!t) {
        rec.winner = JSide::I;
        rec.reason = "player II has no move at ply " + std::to_string(pos.ply);
        return rec;
      }
      JHalfMove half;
      half.ply = pos.ply;
      half.side = JSide::II;
      half.owner = pos.owner;
      half.current = pos.current;
      half.move_II = t;
      Player challenged = other(pos.owner);
      half.pick_stage = src.elimination_stage(challenged, *t);
      const auto& b = pos.pending->borel_set;
      bool legal = std::find(b.begin(), b.end(), *t) != b.end();
      half.legal = legal;
      rec.transcript.push_back(half);
      pos.history.push_back(half);
      if (!legal) {
        rec.winner = JSide::I;
        rec.reason = "illegal move by II at ply " + std::to_string(pos.ply);
        rec.audit_clean = false;
        return rec;
      }
      pos.owner = challenged;
      pos.current = *t;
      pos.pending.reset();
      pos.to_move = JSide::I;
      ++pos.ply;
    }
  }
  rec.winner = JSide::I;
  rec.reason = "player I survived the " + std::to_string(max_plies) + "-ply budget";
  rec.budget_exhausted = true;
  return rec;
}

// Replays a transcript move-by-move against the legality rules; true when
// every recorded move re-validates exactly as recorded.
inline bool audit_play(const JSource& src, const PlayRecord& rec) {
  JPosition pos = initial_position(rec.initial_owner, rec.initial_strategy);
  for (const auto& half : rec.transcript) {
    if (half.ply != pos.ply || half.owner != pos.owner || half.current != pos.current)
      return false;
    if (half.side == JSide::I) {
      if (pos.to_move != JSide::I || !half.move_I) return false;
      bool legal = src.in_relation(pos.owner, pos.current, half.move_I->belief);
      int opp_n = src.n_strategies(other(pos.owner));
      for (int t : half.move_I->borel_set)
        if (t < 0 || t >= opp_n) legal = false;
      if (legal && !half.move_I->belief.concentrated_on(half.move_I->borel_set)) legal = false;
      if (legal != half.legal) return false;
      if (!legal) return true;  // game ended here
      pos.pending = half.move_I;
      pos.to_move = JSide::II;
      ++pos.ply;
    } else {
      if (pos.to_move != JSide::II || !half.move_II || !pos.pending) return false;
      const auto& b = pos.pending->borel_set;
      bool legal = std::find(b.begin(), b.end(), *half.move_II) != b.end();
      if (legal != half.legal) return false;
      if (half.pick_stage != src.elimination_stage(other(pos.owner), *half.move_II)) return false;
      if (!legal) return true;
      pos.owner = other(pos.owner);
      pos.current = *half.move_II;
      pos.pending.reset();
      pos.to_move = JSide::I;
      ++pos.ply;
    }
  }
  return true;
}

// The ordinal certificates of II's eliminated picks, in play order. For
// synthesized II against any legal I from an eliminated start these strictly
// decrease.
inline std::vector<Ordinal> descent_certificate(const PlayRecord& rec) {
  std::vector<Ordinal> out;
  for (const auto& half : rec.transcript)
    if (half.side == JSide::II && half.legal && half.pick_stage) out.push_back(*half.pick_stage);
  return out;
}

inline bool strictly_decreasing(const std::vector<Ordinal>& seq) {
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (!(seq[i] < seq[i - 1])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Strategy-to-type conversion: the hierarchy read off a legal I strategy by
// taking its first belief and pushing it forward along the residual
// strategies' prefixes.
// ---------------------------------------------------------------------------

namespace detail {

struct StrategyHierarchyBuilder {
  const JSource& src;
  const StrategyI& tau;
  std::map<std::tuple<Player, int, int>, std::vector<HMeasure>> memo;  // stationary only

  static std::string line_of(const JPosition& pos) {
    std::ostringstream out;
    out << "(" << pos.owner + 1 << ":" << pos.current << ")";
    for (const auto& half : pos.history) {
      if (half.side == JSide::II && half.move_II) out << " -> " << *half.move_II;
    }
    return out.str();
  }

  // Levels 1..depth of the residual strategy at `pos`.
  std::vector<HMeasure> build(const JPosition& pos, int depth) {
    std::optional<std::tuple<Player, int, int>> key;
    if (tau.stationary) {
      key = std::make_tuple(pos.owner, pos.current, depth);
      if (auto it = memo.find(*key); it != memo.end()) return it->second;
    }
    auto mv = tau.move(pos);
    if (!mv)
      throw Error("strategy is stuck on line " + line_of(pos) +
                  "; the defended strategy is not justifiable");
    if (!src.in_relation(pos.owner, pos.current, mv->belief) ||
        !mv->belief.concentrated_on(mv->borel_set))
      throw Error("strategy emits an illegal move on line " + line_of(pos));

    std::vector<HMeasure> levels;
    levels.push_back(level1_from_belief(mv->belief));
    if (depth > 1) {
      // One recursive dive per challenge yields the residual's full prefix.
      std::vector<std::pair<int, std::vector<HMeasure>>> residuals;
      for (const auto& [t, w] : mv->belief.entries()) {
        (void)w;
        JPosition next = pos;
        JHalfMove h1{pos.ply, JSide::I, pos.owner, pos.current, mv, std::nullopt, std::nullopt, true};
        JHalfMove h2{pos.ply + 1, JSide::II, pos.owner, pos.current, std::nullopt, t, std::nullopt, true};
        next.history.push_back(h1);
        next.history.push_back(h2);
        next.owner = other(pos.owner);
        next.current = t;
        next.ply = pos.ply + 2;
        next.pending.reset();
        next.to_move = JSide::I;
        residuals.emplace_back(t, build(next, depth - 1));
      }
      for (int lvl = 2; lvl <= depth; ++lvl) {
        std::vector<HMeasure::Entry> entries;
        for (std::size_t i = 0; i < residuals.size(); ++i) {
          const auto& [t, sub] = residuals[i];
          std::vector<HMeasure> prefix(sub.begin(), sub.begin() + (lvl - 1));
          entries.emplace_back(make_point(t, std::move(prefix)),
                               mv->belief.entries()[i].second);
        }
        levels.push_back(HMeasure::collect(std::move(entries)));
      }
    }
    if (key) memo.emplace(*key, levels);
    return levels;
  }
};

}  // namespace detail

// delta^1 is tau's first belief; delta^{k+1} pushes it forward along
// t -> (t, residual levels of tau after the challenge t). Throws, naming the
// offending line, if tau gets stuck or moves illegally within depth plies of
// any reachable line.
inline Hierarchy hierarchy_from_strategy(const JSource& src, Player owner, int strategy,
                                         const StrategyI& tau, int depth) {
  if (depth < 1) throw Error("hierarchy depth must be >= 1");
  detail::StrategyHierarchyBuilder builder{src, tau, {}};
  JPosition pos = initial_position(owner, strategy);
  return Hierarchy{owner, builder.build(pos, depth)};
}

// ---------------------------------------------------------------------------
// Text rendering of play records.
// ---------------------------------------------------------------------------

inline std::string render_move_I(const JSource& src, const JHalfMove& half) {
  std::ostringstream out;
  out << "mu:";
  Player challenged = other(half.owner);
  for (const auto& [t, w] : half.move_I->belief.entries())
    out << " " << src.strategy_name(challenged, t) << "=" << w.str();
  out << " ; b:";
  for (int t : half.move_I->borel_set) out << " " << src.strategy_name(challenged, t);
  return out.str();
}

inline std::string render_play(const JSource& src, const PlayRecord& rec) {
  std::ostringstream out;
  out << "defend " << src.strategy_name(rec.initial_owner, rec.initial_strategy) << " (player "
      << rec.initial_owner + 1 << ") ; budget " << rec.ply_budget << "\n";
  for (const auto& half : rec.transcript) {
    out << "ply " << half.ply << " " << (half.side == JSide::I ? "I" : "II") << ": ";
    if (half.side == JSide::I) {
      out << render_move_I(src, half);
    } else {
      out << src.strategy_name(other(half.owner), *half.move_II);
      if (half.pick_stage) out << "  [eliminated at " << half.pick_stage->str() << "]";
    }
    if (!half.legal) out << "  [illegal]";
    out << "\n";
  }
  out << "result: " << (rec.winner == JSide::I ? "I" : "II") << " wins ; " << rec.reason << "\n";
  return out.str();
}

}  // namespace egt
