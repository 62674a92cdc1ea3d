#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "egt/elimination.hpp"
#include "egt/error.hpp"
#include "egt/ordinal.hpp"

namespace egt {

// Symmetric integer game ranked by psi(m*n + r) = w*a_r + n: player 1 gets 1
// when the opponent's integer has strictly smaller rank, 0 otherwise, and
// player 2's payoff mirrors it. Iterated elimination of never-best-responses
// deletes exactly one rank class per round and needs w*(1 + max a_r) rounds
// to empty the space. The horizon N only bounds enumeration in traces and
// closed-form stage sets; the analysis itself is over all naturals.
struct RankedGame {
  std::string name;
  int modulus = 1;                   // m >= 1
  std::vector<std::uint64_t> coeffs; // a_0..a_{m-1}; must cover 0..max contiguously
  int horizon = 16;                  // N, for enumeration only

  void validate() const {
    if (modulus < 1) throw Error("ranked game: modulus must be >= 1");
    if (static_cast<int>(coeffs.size()) != modulus)
      throw Error("ranked game: need exactly one coefficient per residue");
    if (horizon < 1) throw Error("ranked game: horizon must be >= 1");
    std::uint64_t mx = max_coeff();
    // Rank classes must make psi surjective onto w*(1+max); a gap in the
    // coefficient values would silently relabel every stage past it.
    for (std::uint64_t c = 0; c <= mx; ++c)
      if (std::find(coeffs.begin(), coeffs.end(), c) == coeffs.end())
        throw Error("ranked game: coefficient values must cover 0..max without gaps");
  }

  std::uint64_t max_coeff() const {
    std::uint64_t mx = 0;
    for (auto c : coeffs) mx = std::max(mx, c);
    return mx;
  }

  // psi(k) = w*a_{k mod m} + (k div m)
  Ordinal rank(std::uint64_t k) const {
    return Ordinal::omega_times_plus(coeffs[static_cast<std::size_t>(k % static_cast<std::uint64_t>(modulus))],
                                     k / static_cast<std::uint64_t>(modulus));
  }

  // w*(1 + max a_r): the length of the pre-wellorder, and the convergence
  // ordinal of elimination. Always a limit ordinal here, so no rank class is
  // maximal and a belief concentrated high up never justifies everything.
  Ordinal bound() const { return Ordinal::omega(max_coeff() + 1); }

  // Least integer of rank exactly gamma; gamma must lie below bound().
  std::uint64_t least_with_rank(const Ordinal& gamma) const {
    if (!(gamma < bound())) throw Error("rank out of range");
    std::uint64_t c = gamma.coeff(1);
    std::uint64_t n = gamma.coeff(0);
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(modulus); ++r)
      if (coeffs[static_cast<std::size_t>(r)] == c)
        return static_cast<std::uint64_t>(modulus) * n + r;
    throw Error("rank out of range");  // unreachable given contiguity
  }
};

// Stage-set representation for the ranked family: during elimination the
// survivor set is always {k : psi(k) >= threshold}. The threshold form is
// exact over the whole integer space, not just the enumeration horizon.
struct RankedSurvivors {
  Ordinal threshold;

  bool contains(const RankedGame& rg, std::uint64_t k) const {
    return rg.rank(k) >= threshold;
  }
  bool empty(const RankedGame& rg) const { return !(threshold < rg.bound()); }
};

// Closed-form stage-gamma survivor set, enumerated below the horizon:
// {k < N : psi(k) >= gamma}.
inline std::vector<std::uint64_t> ranked_stages(const RankedGame& rg, const Ordinal& gamma) {
  rg.validate();
  if (gamma > rg.bound()) throw Error("stage ordinal exceeds the family bound");
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(rg.horizon); ++k)
    if (rg.rank(k) >= gamma) out.push_back(k);
  return out;
}

// Best-response justifiability of integer x against a survivor set S: true
// iff some s in S has psi(s) < psi(x). (A Dirac at such s pays x the maximum
// 1 while every alternative gets at most 1. Without one, x earns 0 against
// any belief on S while some alternative above the support earns positive
// weight, because the rank range is a limit and so has no maximal class.)
// When true, a concrete witness integer is produced and checked.
inline bool ranked_justifiable(const RankedGame& rg, std::uint64_t x, const RankedSurvivors& s) {
  if (s.empty(rg)) throw Error("ranked_justifiable: empty survivor set");
  Ordinal rx = rg.rank(x);
  if (!(s.threshold < rx)) return false;
  std::uint64_t witness = rg.least_with_rank(s.threshold);
  if (!s.contains(rg, witness) || !(rg.rank(witness) < rx))
    throw Error("ranked witness construction failed");
  return true;
}

namespace detail {
inline Rectangle ranked_rectangle(const RankedGame& rg, const RankedSurvivors& s) {
  std::vector<int> side;
  for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(rg.horizon); ++k)
    if (s.contains(rg, k)) side.push_back(static_cast<int>(k));
  return {{side, side}};
}
}  // namespace detail

// Transfinite iterated elimination for the ranked family, run through the
// justifiability criterion on threshold sets. Successor stages delete the
// current minimal rank class; intersections are taken at limit stages and
// recorded explicitly. Stage blocks whose deleted class lies entirely beyond
// the horizon are elided from the trace (nothing enumerable changes), but the
// threshold bookkeeping still passes through them one class at a time.
inline EliminationTrace eliminate_ranked(const RankedGame& rg) {
  rg.validate();
  EliminationTrace trace;
  trace.concept_used = Concept::RAT;
  std::vector<std::string> names;
  for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(rg.horizon); ++k)
    names.push_back(std::to_string(k));
  trace.strategy_names = {names, names};
  std::vector<int> all(static_cast<std::size_t>(rg.horizon));
  std::iota(all.begin(), all.end(), 0);
  trace.initial = {{all, all}};

  const std::uint64_t m = static_cast<std::uint64_t>(rg.modulus);
  const std::uint64_t max_c = rg.max_coeff();
  RankedSurvivors current{Ordinal()};  // threshold 0 = everything survives

  for (std::uint64_t c = 0; c <= max_c; ++c) {
    if (c > 0) {
      // Limit stage w*c: intersect the earlier stages. Nothing new is
      // deleted at the limit itself.
      current.threshold = Ordinal::omega(c);
      Stage stage;
      stage.label = current.threshold;
      stage.limit = true;
      stage.survivors = detail::ranked_rectangle(rg, current);
      trace.stages.push_back(std::move(stage));
    }
    // Successor stages w*c + n + 1 delete the class of rank w*c + n. The
    // class meets the horizon only while its least member does.
    for (std::uint64_t n = 0;; ++n) {
      Ordinal gamma = Ordinal::omega_times_plus(c, n);
      std::vector<int> cls;
      for (std::uint64_t r = 0; r < m; ++r)
        if (rg.coeffs[static_cast<std::size_t>(r)] == c && m * n + r < static_cast<std::uint64_t>(rg.horizon))
          cls.push_back(static_cast<int>(m * n + r));
      if (cls.empty()) break;  // all later classes in this block lie beyond the horizon
      // Engine step: survivors of this round are exactly the justifiable
      // integers; the deleted class is the unjustifiable remainder.
      for (int k : cls)
        if (ranked_justifiable(rg, static_cast<std::uint64_t>(k), current))
          throw Error("ranked engine: minimal class claimed justifiable");
      current.threshold = gamma.successor();
      Stage stage;
      stage.label = current.threshold;
      stage.eliminated = {cls, cls};
      stage.survivors = detail::ranked_rectangle(rg, current);
      for (Player p : {kPlayer1, kPlayer2})
        for (int k : cls)
          trace.eliminated_at[static_cast<std::size_t>(p)].emplace(k, stage.label);
      trace.stages.push_back(std::move(stage));
    }
  }
  current.threshold = rg.bound();
  Stage last;
  last.label = current.threshold;
  last.limit = true;
  last.survivors = detail::ranked_rectangle(rg, current);
  trace.stages.push_back(std::move(last));

  trace.final_rectangle = Rectangle{};
  trace.convergence_ordinal = rg.bound();
  return trace;
}

// ---------------------------------------------------------------------------
// Ranked-game file format:
//
//   ranked-game lipman
//   modulus 2
//   coeffs 0 1
//   horizon 64
// ---------------------------------------------------------------------------

inline RankedGame parse_ranked_game(const std::string& text) {
  RankedGame rg;
  bool have_name = false, have_mod = false, have_coeffs = false, have_horizon = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    try {
      if (kw == "ranked-game") {
        if (toks.size() != 2) throw ParseError(line_no, "expected: ranked-game <name>");
        rg.name = toks[1];
        have_name = true;
      } else if (kw == "modulus") {
        if (toks.size() != 2) throw ParseError(line_no, "expected: modulus <m>");
        rg.modulus = std::stoi(toks[1]);
        have_mod = true;
      } else if (kw == "coeffs") {
        rg.coeffs.clear();
        for (std::size_t i = 1; i < toks.size(); ++i)
          rg.coeffs.push_back(std::stoull(toks[i]));
        have_coeffs = true;
      } else if (kw == "horizon") {
        if (toks.size() != 2) throw ParseError(line_no, "expected: horizon <N>");
        rg.horizon = std::stoi(toks[1]);
        have_horizon = true;
      } else {
        throw ParseError(line_no, "unknown directive '" + kw + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ParseError(line_no, "invalid number");
    } catch (const std::out_of_range&) {
      throw ParseError(line_no, "number out of range");
    }
  }
  if (!have_name || !have_mod || !have_coeffs || !have_horizon)
    throw ParseError(line_no, "ranked-game file needs name, modulus, coeffs, horizon");
  rg.validate();
  return rg;
}

inline std::string emit_ranked_game(const RankedGame& rg) {
  std::ostringstream out;
  out << "ranked-game " << rg.name << "\nmodulus " << rg.modulus << "\ncoeffs";
  for (auto c : rg.coeffs) out << " " << c;
  out << "\nhorizon " << rg.horizon << "\n";
  return out.str();
}

}  // namespace egt
