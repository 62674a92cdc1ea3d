#pragma once

#include <array>
#include <cctype>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "egt/error.hpp"
#include "egt/measure.hpp"
#include "egt/rational.hpp"

namespace egt {

// Players are 0-based internally; text formats and the CLI speak 1/2.
using Player = int;
inline constexpr Player kPlayer1 = 0;
inline constexpr Player kPlayer2 = 1;
inline Player other(Player p) { return 1 - p; }

// A belief (mixed strategy): finite-support measure over strategy indices of
// one player's strategy list, ordered by list position.
using Belief = FiniteMeasure<int>;

// Two-player strategic-form game. Both payoff matrices are indexed
// [strategy of player 1][strategy of player 2].
struct Game {
  std::string name;
  std::array<std::vector<std::string>, 2> strategies;
  std::array<std::vector<std::vector<Rational>>, 2> payoffs;

  int n_strategies(Player p) const { return static_cast<int>(strategies[static_cast<std::size_t>(p)].size()); }

  // Payoff to `p` when p plays `own` and the opponent plays `opp`.
  const Rational& payoff_for(Player p, int own, int opp) const {
    int row = p == kPlayer1 ? own : opp;
    int col = p == kPlayer1 ? opp : own;
    return payoffs[static_cast<std::size_t>(p)][static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  }

  int strategy_index(Player p, std::string_view id) const {
    const auto& list = strategies[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < list.size(); ++i)
      if (list[i] == id) return static_cast<int>(i);
    throw Error("unknown strategy '" + std::string(id) + "' for player " + std::to_string(p + 1));
  }

  const std::string& strategy_name(Player p, int idx) const {
    const auto& list = strategies[static_cast<std::size_t>(p)];
    if (idx < 0 || idx >= static_cast<int>(list.size()))
      throw Error("strategy index out of range");
    return list[static_cast<std::size_t>(idx)];
  }

  std::vector<int> all_indices(Player p) const {
    std::vector<int> v(static_cast<std::size_t>(n_strategies(p)));
    std::iota(v.begin(), v.end(), 0);
    return v;
  }

  void validate() const {
    for (Player p : {kPlayer1, kPlayer2}) {
      const auto& list = strategies[static_cast<std::size_t>(p)];
      if (list.empty()) throw Error("player " + std::to_string(p + 1) + " has no strategies");
      for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j)
          if (list[i] == list[j])
            throw Error("duplicate strategy '" + list[i] + "' for player " + std::to_string(p + 1));
      const auto& mat = payoffs[static_cast<std::size_t>(p)];
      if (static_cast<int>(mat.size()) != n_strategies(kPlayer1))
        throw DimensionError("payoff matrix " + std::to_string(p + 1) + " has wrong row count");
      for (const auto& row : mat)
        if (static_cast<int>(row.size()) != n_strategies(kPlayer2))
          throw DimensionError("payoff matrix " + std::to_string(p + 1) + " has wrong column count");
    }
  }
};

inline void check_belief_over(const Game& g, Player side, const Belief& mu) {
  for (const auto& [idx, w] : mu.entries()) {
    (void)w;
    if (idx < 0 || idx >= g.n_strategies(side))
      throw Error("belief mentions strategy index " + std::to_string(idx) +
                  " outside player " + std::to_string(side + 1) + "'s list");
  }
}

// Exact double expectation of p's payoff under (own, opp) beliefs. Pure
// strategies enter as Dirac measures through the overloads below.
inline Rational expected_payoff(const Game& g, Player p, const Belief& own, const Belief& opp) {
  check_belief_over(g, p, own);
  check_belief_over(g, other(p), opp);
  Rational total = 0;
  for (const auto& [s, ws] : own.entries())
    for (const auto& [t, wt] : opp.entries())
      total += ws * wt * g.payoff_for(p, s, t);
  return total;
}

inline Rational expected_payoff(const Game& g, Player p, int own_pure, const Belief& opp) {
  return expected_payoff(g, p, Belief::dirac(own_pure), opp);
}

inline Rational expected_payoff(const Game& g, Player p, const Belief& own, int opp_pure) {
  return expected_payoff(g, p, own, Belief::dirac(opp_pure));
}

inline Rational expected_payoff(const Game& g, Player p, int own_pure, int opp_pure) {
  return g.payoff_for(p, own_pure, opp_pure);
}

// ---------------------------------------------------------------------------
// Game file format (line oriented, '#' starts a comment):
//
//   game cascade
//   strategies 1 a b
//   strategies 2 x y
//   payoffs 1
//   1 0
//   0 2
//   payoffs 2
//   1 0
//   1 0
//
// Rows are indexed by player 1's strategy list, columns by player 2's; both
// payoff blocks use this orientation. Entries are rational literals.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace detail

inline Game parse_game(const std::string& text) {
  Game g;
  bool have_name = false;
  std::array<bool, 2> have_strats{false, false};
  std::array<bool, 2> have_payoffs{false, false};
  int payoff_block = -1;  // player whose payoff rows we are reading
  std::size_t payoff_row = 0;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) continue;

    if (payoff_block >= 0) {
      auto& mat = g.payoffs[static_cast<std::size_t>(payoff_block)];
      if (payoff_row < mat.size()) {
        if (toks.size() != static_cast<std::size_t>(g.n_strategies(kPlayer2)))
          throw ParseError(line_no, "expected " + std::to_string(g.n_strategies(kPlayer2)) +
                                        " payoff entries, found " + std::to_string(toks.size()));
        for (std::size_t j = 0; j < toks.size(); ++j) {
          try {
            mat[payoff_row][j] = Rational::parse(toks[j]);
          } catch (const Error&) {
            throw ParseError(line_no, "invalid rational '" + toks[j] + "'");
          }
        }
        ++payoff_row;
        if (payoff_row == mat.size()) {
          have_payoffs[static_cast<std::size_t>(payoff_block)] = true;
          payoff_block = -1;
        }
        continue;
      }
    }

    const std::string& kw = toks[0];
    if (kw == "game") {
      if (toks.size() != 2) throw ParseError(line_no, "expected: game <name>");
      g.name = toks[1];
      have_name = true;
    } else if (kw == "strategies") {
      if (toks.size() < 3) throw ParseError(line_no, "expected: strategies <1|2> <ids...>");
      int p = toks[1] == "1" ? 0 : toks[1] == "2" ? 1 : -1;
      if (p < 0) throw ParseError(line_no, "player must be 1 or 2");
      if (have_strats[static_cast<std::size_t>(p)]) throw ParseError(line_no, "duplicate strategies block");
      auto& list = g.strategies[static_cast<std::size_t>(p)];
      list.assign(toks.begin() + 2, toks.end());
      for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j)
          if (list[i] == list[j]) throw ParseError(line_no, "duplicate strategy id '" + list[i] + "'");
      have_strats[static_cast<std::size_t>(p)] = true;
    } else if (kw == "payoffs") {
      if (toks.size() != 2) throw ParseError(line_no, "expected: payoffs <1|2>");
      int p = toks[1] == "1" ? 0 : toks[1] == "2" ? 1 : -1;
      if (p < 0) throw ParseError(line_no, "player must be 1 or 2");
      if (!have_strats[0] || !have_strats[1])
        throw ParseError(line_no, "payoffs block before both strategies lines");
      if (have_payoffs[static_cast<std::size_t>(p)] ) throw ParseError(line_no, "duplicate payoffs block");
      g.payoffs[static_cast<std::size_t>(p)].assign(
          static_cast<std::size_t>(g.n_strategies(kPlayer1)),
          std::vector<Rational>(static_cast<std::size_t>(g.n_strategies(kPlayer2)), Rational(0)));
      payoff_block = p;
      payoff_row = 0;
    } else {
      throw ParseError(line_no, "unknown directive '" + kw + "'");
    }
  }
  if (payoff_block >= 0) throw ParseError(line_no, "payoff block ended early");
  if (!have_name) throw ParseError(line_no, "missing 'game' line");
  if (!have_strats[0] || !have_strats[1]) throw ParseError(line_no, "missing strategies line");
  if (!have_payoffs[0] || !have_payoffs[1]) throw ParseError(line_no, "missing payoffs block");
  g.validate();
  return g;
}

inline std::string emit_game(const Game& g) {
  std::ostringstream out;
  out << "game " << g.name << "\n";
  for (Player p : {kPlayer1, kPlayer2}) {
    out << "strategies " << p + 1;
    for (const auto& s : g.strategies[static_cast<std::size_t>(p)]) out << " " << s;
    out << "\n";
  }
  for (Player p : {kPlayer1, kPlayer2}) {
    out << "payoffs " << p + 1 << "\n";
    for (const auto& row : g.payoffs[static_cast<std::size_t>(p)]) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j].str();
      out << "\n";
    }
  }
  return out.str();
}

inline bool same_game(const Game& a, const Game& b) {
  return a.name == b.name && a.strategies == b.strategies && a.payoffs == b.payoffs;
}

// Renders a belief over `side`'s strategies as "id=w id=w ...".
inline std::string belief_str(const Game& g, Player side, const Belief& mu) {
  std::string out;
  for (const auto& [idx, w] : mu.entries()) {
    if (!out.empty()) out += " ";
    out += g.strategy_name(side, idx) + "=" + w.str();
  }
  return out;
}

// Parses "id=1/2 id2=1/2" (also accepts commas as separators).
inline Belief parse_belief(const Game& g, Player side, const std::string& text) {
  std::string norm = text;
  for (char& c : norm)
    if (c == ',') c = ' ';
  std::vector<Belief::Entry> entries;
  for (const auto& tok : detail::split_ws(norm)) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error("belief entry '" + tok + "' is not id=weight");
    int idx = g.strategy_index(side, tok.substr(0, eq));
    entries.emplace_back(idx, Rational::parse(tok.substr(eq + 1)));
  }
  return Belief::from_entries(std::move(entries));
}

}  // namespace egt
