#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "egt/error.hpp"
#include "egt/game.hpp"
#include "egt/linear.hpp"
#include "egt/ordinal.hpp"
#include "egt/response.hpp"

namespace egt {

// The four iterated-elimination solution concepts for finite games, plus the
// abstract fixpoint for polyhedral strategy-belief relations.
enum class Concept { RAT, MRAT, IU, MIU, ERAT };

inline std::string concept_name(Concept c) {
  switch (c) {
    case Concept::RAT: return "RAT";
    case Concept::MRAT: return "MRAT";
    case Concept::IU: return "IU";
    case Concept::MIU: return "MIU";
    case Concept::ERAT: return "E-RAT";
  }
  return "?";
}

inline std::optional<Concept> concept_from_name(std::string name) {
  for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (name == "rat") return Concept::RAT;
  if (name == "mrat") return Concept::MRAT;
  if (name == "iu") return Concept::IU;
  if (name == "miu") return Concept::MIU;
  if (name == "e-rat" || name == "erat") return Concept::ERAT;
  return std::nullopt;
}

// Product of per-player strategy subsets, stored as sorted index lists.
struct Rectangle {
  std::array<std::vector<int>, 2> sides;

  bool operator==(const Rectangle& o) const { return sides == o.sides; }
  bool empty_side() const { return sides[0].empty() || sides[1].empty(); }
  bool contains(Player p, int s) const {
    const auto& v = sides[static_cast<std::size_t>(p)];
    return std::find(v.begin(), v.end(), s) != v.end();
  }
};

// A surviving strategy's per-stage certificate: the canonical justifying
// belief for the best-response concepts, or recorded absence of a dominating
// mixture for the dominance concepts.
struct Justification {
  enum class Kind { JustifyingBelief, Undominated } kind = Kind::JustifyingBelief;
  std::optional<Belief> belief;  // present iff kind == JustifyingBelief
};

struct Stage {
  Ordinal label;
  bool limit = false;  // marks an intersection stage in transfinite traces
  std::array<std::vector<int>, 2> eliminated;
  Rectangle survivors;  // after this stage
  std::array<std::map<int, Justification>, 2> justifications;  // per survivor
};

// Ordinal-labelled sequence of shrinking survivor rectangles, with the
// per-strategy certificates that make the trace re-checkable.
struct EliminationTrace {
  Concept concept_used = Concept::RAT;
  std::array<std::vector<std::string>, 2> strategy_names;
  Rectangle initial;
  std::vector<Stage> stages;  // stages that eliminated something, plus limit markers
  Rectangle final_rectangle;
  std::array<std::map<int, Justification>, 2> final_justifications;
  Ordinal convergence_ordinal;
  std::array<std::map<int, Ordinal>, 2> eliminated_at;  // strategy -> stage label

  bool is_survivor(Player p, int s) const {
    return eliminated_at[static_cast<std::size_t>(p)].find(s) ==
           eliminated_at[static_cast<std::size_t>(p)].end();
  }
  std::optional<Ordinal> elimination_stage(Player p, int s) const {
    auto it = eliminated_at[static_cast<std::size_t>(p)].find(s);
    if (it == eliminated_at[static_cast<std::size_t>(p)].end()) return std::nullopt;
    return it->second;
  }
  // Survivors after `n` finite rounds (the full list for n = 0).
  std::vector<int> survivors_at_finite_stage(Player p, std::uint64_t n) const {
    std::vector<int> out;
    for (std::size_t s = 0; s < strategy_names[static_cast<std::size_t>(p)].size(); ++s) {
      auto stage = elimination_stage(p, static_cast<int>(s));
      if (!stage || *stage > Ordinal::natural(n)) out.push_back(static_cast<int>(s));
    }
    return out;
  }
};

namespace detail {

struct RoundResult {
  std::array<std::vector<int>, 2> survivors;
  std::array<std::vector<int>, 2> eliminated;
  std::array<std::map<int, Justification>, 2> justifications;
  bool anything_eliminated() const { return !eliminated[0].empty() || !eliminated[1].empty(); }
};

// One simultaneous round of the displayed successor condition, for all four
// finite-game concepts. Once a side is empty no opposing strategy can carry a
// belief concentrated on it, so the other side empties at the next round.
inline RoundResult eliminate_round(const Game& g, Concept mode,
                                   const std::array<std::vector<int>, 2>& current) {
  RoundResult out;
  for (Player p : {kPlayer1, kPlayer2}) {
    const auto& own = current[static_cast<std::size_t>(p)];
    const auto& opp = current[static_cast<std::size_t>(other(p))];
    if (opp.empty()) {
      out.eliminated[static_cast<std::size_t>(p)] = own;
      continue;
    }
    for (int s : own) {
      bool survives = false;
      Justification just;
      switch (mode) {
        case Concept::RAT:
        case Concept::MRAT: {
          const std::vector<int>& alts = mode == Concept::RAT ? g.all_indices(p) : own;
          auto belief = find_justifying_belief(g, p, s, opp, alts);
          if (belief) {
            if (!is_best_response(g, p, s, *belief, alts))
              throw Error("canonical justifier failed re-check");
            survives = true;
            just = {Justification::Kind::JustifyingBelief, std::move(belief)};
          }
          break;
        }
        case Concept::IU:
        case Concept::MIU: {
          const std::vector<int>& mix = mode == Concept::IU ? g.all_indices(p) : own;
          auto cert = strict_dominance_certificate(g, p, s, mix, opp);
          if (!cert) {
            survives = true;
            just = {Justification::Kind::Undominated, std::nullopt};
          }
          break;
        }
        case Concept::ERAT:
          throw Error("E-RAT runs through rat_of_relation");
      }
      if (survives) {
        out.survivors[static_cast<std::size_t>(p)].push_back(s);
        out.justifications[static_cast<std::size_t>(p)].emplace(s, std::move(just));
      } else {
        out.eliminated[static_cast<std::size_t>(p)].push_back(s);
      }
    }
  }
  return out;
}

// Independent per-strategy cross-checks of a committed round, through the
// never-best-response <-> strictly-dominated bridge: a strategy eliminated by
// the belief route must carry a dominating mixture over the matching support,
// and vice versa. Margins and beliefs are re-verified by exact substitution.
inline void verify_round(const Game& g, Concept mode,
                         const std::array<std::vector<int>, 2>& before,
                         const RoundResult& round) {
  for (Player p : {kPlayer1, kPlayer2}) {
    const auto& own = before[static_cast<std::size_t>(p)];
    const auto& opp = before[static_cast<std::size_t>(other(p))];
    if (opp.empty()) continue;
    const std::vector<int>& companion_set =
        (mode == Concept::RAT || mode == Concept::IU) ? g.all_indices(p) : own;
    for (int s : round.eliminated[static_cast<std::size_t>(p)]) {
      auto cert = strict_dominance_certificate(g, p, s, companion_set, opp);
      if (!cert) throw Error("eliminated strategy lacks a dominance certificate");
      for (int t : opp)
        if (!(expected_payoff(g, p, cert->mixture, t) > expected_payoff(g, p, s, t)))
          throw Error("dominance certificate fails exact re-substitution");
    }
    for (int s : round.survivors[static_cast<std::size_t>(p)]) {
      auto belief = find_justifying_belief(g, p, s, opp, companion_set);
      if (!belief || !is_best_response(g, p, s, *belief, companion_set))
        throw Error("surviving strategy lacks a justifying belief");
    }
  }
}

}  // namespace detail

// Iterated elimination for RAT, MRAT, IU, MIU on a finite game. Stage sets
// follow the displayed successor conditions exactly; every round is
// re-verified by independent certificates before being committed, so the
// returned trace doubles as a machine-checkable proof object.
inline EliminationTrace eliminate(const Game& g, Concept mode) {
  g.validate();
  if (mode == Concept::ERAT) throw Error("E-RAT requires a polyhedral relation");
  EliminationTrace trace;
  trace.concept_used = mode;
  trace.strategy_names = g.strategies;
  trace.initial = {{g.all_indices(kPlayer1), g.all_indices(kPlayer2)}};

  std::array<std::vector<int>, 2> current = trace.initial.sides;
  std::uint64_t round_no = 0;
  for (;;) {
    detail::RoundResult round = detail::eliminate_round(g, mode, current);
    detail::verify_round(g, mode, current, round);
    if (!round.anything_eliminated()) {
      trace.final_rectangle = {current};
      trace.final_justifications = std::move(round.justifications);
      trace.convergence_ordinal = Ordinal::natural(round_no);
      return trace;
    }
    ++round_no;
    Stage stage;
    stage.label = Ordinal::natural(round_no);
    stage.eliminated = round.eliminated;
    stage.survivors = {round.survivors};
    stage.justifications = round.justifications;
    for (Player p : {kPlayer1, kPlayer2})
      for (int s : round.eliminated[static_cast<std::size_t>(p)])
        trace.eliminated_at[static_cast<std::size_t>(p)].emplace(s, stage.label);
    trace.stages.push_back(std::move(stage));
    current = round.survivors;
  }
}

// ---------------------------------------------------------------------------
// Abstract relations between strategies and beliefs, one linear system per
// strategy whose feasible set (within the opponent belief simplex) is the
// fiber E_i(s). Best-response relations of games are the canonical instances.
// ---------------------------------------------------------------------------

struct PolyhedralRelation {
  std::array<std::vector<std::string>, 2> strategy_names;
  std::array<std::vector<LinearSystem>, 2> systems;  // systems[i][s] over |opponent| variables

  int n_strategies(Player p) const { return static_cast<int>(strategy_names[static_cast<std::size_t>(p)].size()); }

  std::vector<int> all_indices(Player p) const {
    std::vector<int> v(static_cast<std::size_t>(n_strategies(p)));
    std::iota(v.begin(), v.end(), 0);
    return v;
  }

  void validate() const {
    for (Player p : {kPlayer1, kPlayer2}) {
      if (systems[static_cast<std::size_t>(p)].size() != strategy_names[static_cast<std::size_t>(p)].size())
        throw DimensionError("relation must carry one system per strategy");
      for (const auto& sys : systems[static_cast<std::size_t>(p)])
        if (sys.num_vars != n_strategies(other(p)))
          throw DimensionError("relation system dimension does not match opponent strategy count");
    }
  }

  // Exact membership (s, mu) in E_p.
  bool contains(Player p, int s, const Belief& mu) const {
    std::vector<Rational> x(static_cast<std::size_t>(n_strategies(other(p))), Rational(0));
    for (const auto& [t, w] : mu.entries()) {
      if (t < 0 || t >= n_strategies(other(p))) return false;
      x[static_cast<std::size_t>(t)] = w;
    }
    return systems[static_cast<std::size_t>(p)][static_cast<std::size_t>(s)].satisfied_by(x);
  }
};

// Helper: the simplex rows every relation fiber is expected to contain.
inline LinearSystem belief_simplex(int n) {
  LinearSystem sys(n);
  std::vector<Rational> ones(static_cast<std::size_t>(n), Rational(1));
  sys.add_eq(ones, Rational(1));
  for (int t = 0; t < n; ++t) {
    std::vector<Rational> row(static_cast<std::size_t>(n), Rational(0));
    row[static_cast<std::size_t>(t)] = -1;
    sys.add_le(std::move(row), Rational(0));
  }
  return sys;
}

inline PolyhedralRelation best_response_relation(const Game& g) {
  PolyhedralRelation rel;
  rel.strategy_names = g.strategies;
  for (Player p : {kPlayer1, kPlayer2}) {
    auto alts = g.all_indices(p);
    auto full = g.all_indices(other(p));
    for (int s = 0; s < g.n_strategies(p); ++s)
      rel.systems[static_cast<std::size_t>(p)].push_back(
          belief_polyhedron(g, p, s, full, alts).system);
  }
  return rel;
}

// Canonical feasible belief of E_p(s) restricted to supports inside
// `allowed`, or absence.
inline std::optional<Belief> relation_justifier(const PolyhedralRelation& rel, Player p, int s,
                                                const std::vector<int>& allowed) {
  LinearSystem sys = rel.systems[static_cast<std::size_t>(p)][static_cast<std::size_t>(s)];
  int n = sys.num_vars;
  std::vector<bool> ok(static_cast<std::size_t>(n), false);
  for (int t : allowed)
    if (t >= 0 && t < n) ok[static_cast<std::size_t>(t)] = true;
  for (int t = 0; t < n; ++t) {
    if (ok[static_cast<std::size_t>(t)]) continue;
    std::vector<Rational> row(static_cast<std::size_t>(n), Rational(0));
    row[static_cast<std::size_t>(t)] = 1;
    sys.add_eq(std::move(row), Rational(0));
  }
  auto witness = lp_feasible(sys);
  if (!witness) return std::nullopt;
  return witness_to_belief(*witness);
}

// Iterated deletion of non-justified strategies for an abstract relation; the
// final rectangle is the maximal justified one.
inline EliminationTrace rat_of_relation(const PolyhedralRelation& rel) {
  rel.validate();
  EliminationTrace trace;
  trace.concept_used = Concept::ERAT;
  trace.strategy_names = rel.strategy_names;
  trace.initial = {{rel.all_indices(kPlayer1), rel.all_indices(kPlayer2)}};

  std::array<std::vector<int>, 2> current = trace.initial.sides;
  std::uint64_t round_no = 0;
  for (;;) {
    detail::RoundResult round;
    for (Player p : {kPlayer1, kPlayer2}) {
      const auto& own = current[static_cast<std::size_t>(p)];
      const auto& opp = current[static_cast<std::size_t>(other(p))];
      if (opp.empty()) {
        round.eliminated[static_cast<std::size_t>(p)] = own;
        continue;
      }
      for (int s : own) {
        auto belief = relation_justifier(rel, p, s, opp);
        if (belief) {
          if (!rel.contains(p, s, *belief)) throw Error("relation justifier failed re-check");
          round.survivors[static_cast<std::size_t>(p)].push_back(s);
          round.justifications[static_cast<std::size_t>(p)].emplace(
              s, Justification{Justification::Kind::JustifyingBelief, std::move(belief)});
        } else {
          round.eliminated[static_cast<std::size_t>(p)].push_back(s);
        }
      }
    }
    if (!round.anything_eliminated()) {
      trace.final_rectangle = {current};
      trace.final_justifications = std::move(round.justifications);
      trace.convergence_ordinal = Ordinal::natural(round_no);
      return trace;
    }
    ++round_no;
    Stage stage;
    stage.label = Ordinal::natural(round_no);
    stage.eliminated = round.eliminated;
    stage.survivors = {round.survivors};
    stage.justifications = round.justifications;
    for (Player p : {kPlayer1, kPlayer2})
      for (int s : round.eliminated[static_cast<std::size_t>(p)])
        trace.eliminated_at[static_cast<std::size_t>(p)].emplace(s, stage.label);
    trace.stages.push_back(std::move(stage));
    current = round.survivors;
  }
}

struct JustifiedCheck {
  bool justified = true;
  // Certificate per (player, strategy) of the rectangle; absence marks the
  // failing strategies.
  std::array<std::map<int, std::optional<Belief>>, 2> certificates;
};

// Is every strategy on each side of `r` justified by a belief concentrated on
// the other side? Certificates are returned for audit.
inline JustifiedCheck check_e_justified(const PolyhedralRelation& rel, const Rectangle& r) {
  rel.validate();
  JustifiedCheck out;
  for (Player p : {kPlayer1, kPlayer2}) {
    const auto& own = r.sides[static_cast<std::size_t>(p)];
    const auto& opp = r.sides[static_cast<std::size_t>(other(p))];
    for (int s : own) {
      std::optional<Belief> cert;
      if (!opp.empty()) cert = relation_justifier(rel, p, s, opp);
      if (!cert) out.justified = false;
      out.certificates[static_cast<std::size_t>(p)].emplace(s, std::move(cert));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text rendering of traces: one block per stage, then the fixpoint line.
// ---------------------------------------------------------------------------

inline std::string format_strategy_set(const std::vector<std::string>& names,
                                       const std::vector<int>& idxs) {
  std::string out = "{";
  for (std::size_t k = 0; k < idxs.size(); ++k) {
    if (k) out += ", ";
    out += names[static_cast<std::size_t>(idxs[k])];
  }
  return out + "}";
}

inline std::string render_trace(const EliminationTrace& trace) {
  std::ostringstream out;
  auto ids = [&](Player p, const std::vector<int>& v) {
    if (v.empty()) return std::string("-");
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) s += " ";
      s += trace.strategy_names[static_cast<std::size_t>(p)][static_cast<std::size_t>(v[k])];
    }
    return s;
  };
  for (const auto& stage : trace.stages) {
    out << "stage " << stage.label.str() << (stage.limit ? " (limit)" : "") << ": eliminated 1: "
        << ids(kPlayer1, stage.eliminated[0]) << " ; eliminated 2: "
        << ids(kPlayer2, stage.eliminated[1]) << "\n";
  }
  out << "fixpoint: " << format_strategy_set(trace.strategy_names[0], trace.final_rectangle.sides[0])
      << " x " << format_strategy_set(trace.strategy_names[1], trace.final_rectangle.sides[1])
      << " at " << trace.convergence_ordinal.str() << "\n";
  return out.str();
}

}  // namespace egt
