#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "egt/error.hpp"
#include "egt/game.hpp"
#include "egt/hierarchy.hpp"

namespace egt {

// ---------------------------------------------------------------------------
// Witness file format: nested parenthesized text.
//
//   (hierarchy player=1 strategy=D
//     (level 1 ((D) 1/1))
//     (level 2 (((D) (level 1 ((D) 1/1))) 1/1)))
//
// grammar:
//   witness := '(' 'hierarchy' 'player=' (1|2) 'strategy=' ID level+ ')'
//   level   := '(' 'level' K entry+ ')'        K = 1-based level index
//   entry   := '(' point WEIGHT ')'            WEIGHT = rational 'p/q'
//   point   := '(' ID ')'                      order-0 point
//            | '(' point level+ ')'            order-m point with its prefix
//
// A level-K measure lives on order-(K-1) points; an order-m point names an
// opponent strategy and carries the opponent's level blocks 1..m. Weights are
// emitted in explicit p/q form; parsing accepts plain integers too.
// ---------------------------------------------------------------------------

namespace detail {

inline void emit_level(std::ostream& out, const Game& g, Player owner, int k, const HMeasure& m);

inline void emit_point(std::ostream& out, const Game& g, Player owner, const HPointPtr& p) {
  Player j = other(owner);
  if (p->order() == 0) {
    out << "(" << g.strategy_name(j, p->strategy) << ")";
    return;
  }
  out << "((" << g.strategy_name(j, p->strategy) << ")";
  for (int k = 1; k <= p->order(); ++k) {
    out << " ";
    emit_level(out, g, j, k, p->beliefs[static_cast<std::size_t>(k - 1)]);
  }
  out << ")";
}

inline void emit_level(std::ostream& out, const Game& g, Player owner, int k, const HMeasure& m) {
  out << "(level " << k;
  for (const auto& [p, w] : m.entries()) {
    out << " (";
    emit_point(out, g, owner, p);
    out << " " << w.numerator().str() << "/" << w.denominator().str() << ")";
  }
  out << ")";
}

struct Tok {
  enum Kind { Open, Close, Atom } kind;
  std::string text;
};

inline std::vector<Tok> tokenize_sexpr(const std::string& text) {
  std::vector<Tok> out;
  std::string atom;
  auto flush = [&] {
    if (!atom.empty()) {
      out.push_back({Tok::Atom, atom});
      atom.clear();
    }
  };
  for (char c : text) {
    if (c == '(') { flush(); out.push_back({Tok::Open, "("}); }
    else if (c == ')') { flush(); out.push_back({Tok::Close, ")"}); }
    else if (std::isspace(static_cast<unsigned char>(c))) flush();
    else atom += c;
  }
  flush();
  return out;
}

struct SexprCursor {
  const std::vector<Tok>& toks;
  std::size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const Tok& peek() const {
    if (done()) throw Error("witness text ended early");
    return toks[pos];
  }
  Tok next() {
    Tok t = peek();
    ++pos;
    return t;
  }
  void expect_open() {
    if (next().kind != Tok::Open) throw Error("witness text: expected '('");
  }
  void expect_close() {
    if (next().kind != Tok::Close) throw Error("witness text: expected ')'");
  }
  std::string atom() {
    Tok t = next();
    if (t.kind != Tok::Atom) throw Error("witness text: expected an atom");
    return t.text;
  }
};

inline HMeasure parse_level(SexprCursor& cur, const Game& g, Player owner, int expected_k);

inline HPointPtr parse_point(SexprCursor& cur, const Game& g, Player owner) {
  Player j = other(owner);
  cur.expect_open();
  if (cur.peek().kind == Tok::Atom) {
    int idx = g.strategy_index(j, cur.atom());
    cur.expect_close();
    return make_point(idx);
  }
  // structured: ( (ID) level+ )
  cur.expect_open();
  int idx = g.strategy_index(j, cur.atom());
  cur.expect_close();
  std::vector<HMeasure> levels;
  while (cur.peek().kind == Tok::Open) {
    levels.push_back(parse_level(cur, g, j, static_cast<int>(levels.size()) + 1));
  }
  cur.expect_close();
  return make_point(idx, std::move(levels));
}

inline HMeasure parse_level(SexprCursor& cur, const Game& g, Player owner, int expected_k) {
  cur.expect_open();
  if (cur.atom() != "level") throw Error("witness text: expected 'level'");
  std::string k_text = cur.atom();
  int k = 0;
  try {
    k = std::stoi(k_text);
  } catch (...) {
    throw Error("witness text: bad level index '" + k_text + "'");
  }
  if (k != expected_k)
    throw Error("witness text: level " + std::to_string(k) + " out of sequence, expected " +
                std::to_string(expected_k));
  std::vector<HMeasure::Entry> entries;
  while (cur.peek().kind == Tok::Open) {
    cur.expect_open();
    HPointPtr p = parse_point(cur, g, owner);
    Rational w = Rational::parse(cur.atom());
    cur.expect_close();
    entries.emplace_back(std::move(p), std::move(w));
  }
  cur.expect_close();
  return HMeasure::from_entries(std::move(entries));
}

}  // namespace detail

inline std::string emit_witness(const Game& g, const WitnessEntry& e) {
  std::ostringstream out;
  out << "(hierarchy player=" << e.player + 1 << " strategy="
      << g.strategy_name(e.player, e.strategy);
  for (int k = 1; k <= e.hierarchy.depth(); ++k) {
    out << " ";
    detail::emit_level(out, g, e.player, k, e.hierarchy.levels[static_cast<std::size_t>(k - 1)]);
  }
  out << ")";
  return out.str();
}

inline WitnessEntry parse_witness(const Game& g, const std::string& text) {
  auto toks = detail::tokenize_sexpr(text);
  detail::SexprCursor cur{toks};
  cur.expect_open();
  if (cur.atom() != "hierarchy") throw Error("witness text: expected 'hierarchy'");
  std::string player_field = cur.atom();
  if (player_field != "player=1" && player_field != "player=2")
    throw Error("witness text: expected player=1 or player=2");
  Player p = player_field == "player=1" ? kPlayer1 : kPlayer2;
  std::string strat_field = cur.atom();
  if (strat_field.rfind("strategy=", 0) != 0)
    throw Error("witness text: expected strategy=<id>");
  int s = g.strategy_index(p, strat_field.substr(9));
  std::vector<HMeasure> levels;
  while (!cur.done() && cur.peek().kind == detail::Tok::Open)
    levels.push_back(detail::parse_level(cur, g, p, static_cast<int>(levels.size()) + 1));
  cur.expect_close();
  if (!cur.done()) throw Error("witness text: trailing tokens");
  if (levels.empty()) throw Error("witness text: hierarchy has no levels");
  Hierarchy h{p, std::move(levels)};
  validate_hierarchy_shape(g, h);
  return {p, s, belief_from_level1(h.levels[0]), std::move(h)};
}

}  // namespace egt
