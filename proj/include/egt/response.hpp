#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "egt/error.hpp"
#include "egt/game.hpp"
#include "egt/linear.hpp"
#include "egt/measure.hpp"

namespace egt {

// The feasible set of this system is exactly the set of beliefs (over the
// opponent's full strategy list) to which `strategy` is a best response among
// `alternatives`, with support confined to `support_restriction`.
struct BeliefPolyhedron {
  Player owner = kPlayer1;
  int strategy = 0;
  LinearSystem system;
};

inline BeliefPolyhedron belief_polyhedron(const Game& g, Player p, int s,
                                          const std::vector<int>& support_restriction,
                                          const std::vector<int>& alternatives) {
  Player j = other(p);
  int n = g.n_strategies(j);
  LinearSystem sys(n);

  std::vector<Rational> ones(static_cast<std::size_t>(n), Rational(1));
  sys.add_eq(ones, Rational(1));
  for (int t = 0; t < n; ++t) {
    std::vector<Rational> row(static_cast<std::size_t>(n), Rational(0));
    row[static_cast<std::size_t>(t)] = -1;
    sys.add_le(std::move(row), Rational(0));  // mu_t >= 0
  }
  std::vector<bool> allowed(static_cast<std::size_t>(n), false);
  for (int t : support_restriction) allowed[static_cast<std::size_t>(t)] = true;
  for (int t = 0; t < n; ++t) {
    if (allowed[static_cast<std::size_t>(t)]) continue;
    std::vector<Rational> row(static_cast<std::size_t>(n), Rational(0));
    row[static_cast<std::size_t>(t)] = 1;
    sys.add_eq(std::move(row), Rational(0));
  }
  // payoff(alt, mu) - payoff(s, mu) <= 0 per alternative
  for (int alt : alternatives) {
    std::vector<Rational> row(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
      row[static_cast<std::size_t>(t)] = g.payoff_for(p, alt, t) - g.payoff_for(p, s, t);
    sys.add_le(std::move(row), Rational(0));
  }
  return {p, s, std::move(sys)};
}

// Exact decision: payoff(s, mu) >= payoff(t, mu) for every t in
// `alternatives`. The alternatives parameter realises both the full-list and
// the survivors-only reading of "best response".
inline bool is_best_response(const Game& g, Player p, int s, const Belief& mu,
                             const std::vector<int>& alternatives) {
  check_belief_over(g, other(p), mu);
  Rational mine = expected_payoff(g, p, s, mu);
  for (int t : alternatives)
    if (expected_payoff(g, p, t, mu) > mine) return false;
  return true;
}

inline bool is_best_response(const Game& g, Player p, int s, const Belief& mu) {
  return is_best_response(g, p, s, mu, g.all_indices(p));
}

inline Belief witness_to_belief(const std::vector<Rational>& x) {
  std::vector<Belief::Entry> entries;
  for (std::size_t t = 0; t < x.size(); ++t)
    if (!x[t].is_zero()) entries.emplace_back(static_cast<int>(t), x[t]);
  return Belief::from_entries(std::move(entries));
}

// Canonical justifying belief: the deterministic LP witness of the belief
// polyhedron, or absence when `s` is never a best response within the given
// restriction. A nonempty support restriction is required; the degenerate
// empty stage is the caller's concern.
inline std::optional<Belief> find_justifying_belief(const Game& g, Player p, int s,
                                                    const std::vector<int>& support_restriction,
                                                    const std::vector<int>& alternatives) {
  if (support_restriction.empty())
    throw Error("find_justifying_belief: empty support restriction");
  BeliefPolyhedron poly = belief_polyhedron(g, p, s, support_restriction, alternatives);
  auto witness = lp_feasible(poly.system);
  if (!witness) return std::nullopt;
  return witness_to_belief(*witness);
}

struct DominanceCertificate {
  Belief mixture;   // over the dominating player's own strategies
  Rational margin;  // minimum payoff gap over the listed opponent columns; > 0
};

// Searches for a mixture over `mix_support` that strictly beats `s` against
// every pure opponent strategy in `opponent_set`, by maximising the minimum
// margin and testing that the optimum is positive. Testing against pure
// opponent strategies suffices by linearity.
inline std::optional<DominanceCertificate> strict_dominance_certificate(
    const Game& g, Player p, int s, const std::vector<int>& mix_support,
    const std::vector<int>& opponent_set) {
  if (mix_support.empty() || opponent_set.empty())
    throw Error("strict dominance query with empty strategy set");
  int n = g.n_strategies(p);
  LinearSystem sys(n + 1);  // sigma_0..sigma_{n-1}, margin z

  std::vector<Rational> ones(static_cast<std::size_t>(n) + 1, Rational(1));
  ones.back() = 0;
  sys.add_eq(ones, Rational(1));
  for (int u = 0; u < n; ++u) {
    std::vector<Rational> row(static_cast<std::size_t>(n) + 1, Rational(0));
    row[static_cast<std::size_t>(u)] = -1;
    sys.add_le(std::move(row), Rational(0));
  }
  std::vector<bool> allowed(static_cast<std::size_t>(n), false);
  for (int u : mix_support) allowed[static_cast<std::size_t>(u)] = true;
  for (int u = 0; u < n; ++u) {
    if (allowed[static_cast<std::size_t>(u)]) continue;
    std::vector<Rational> row(static_cast<std::size_t>(n) + 1, Rational(0));
    row[static_cast<std::size_t>(u)] = 1;
    sys.add_eq(std::move(row), Rational(0));
  }
  // z - sum_u sigma_u payoff(u, t) <= -payoff(s, t) for each opponent column
  for (int t : opponent_set) {
    std::vector<Rational> row(static_cast<std::size_t>(n) + 1);
    for (int u = 0; u < n; ++u) row[static_cast<std::size_t>(u)] = -g.payoff_for(p, u, t);
    row.back() = 1;
    sys.add_le(std::move(row), -g.payoff_for(p, s, t));
  }
  std::vector<Rational> obj(static_cast<std::size_t>(n) + 1, Rational(0));
  obj.back() = 1;
  sys.set_objective(obj);

  LpResult r = lp_optimize(sys);
  if (r.status != LpStatus::Optimal) throw Error("dominance program must be bounded and feasible");
  if (!(r.optimum > Rational(0))) return std::nullopt;
  std::vector<Rational> sigma(r.witness.begin(), r.witness.end() - 1);
  return DominanceCertificate{witness_to_belief(sigma), r.optimum};
}

inline std::optional<Belief> is_strictly_dominated(const Game& g, Player p, int s,
                                                   const std::vector<int>& mix_support,
                                                   const std::vector<int>& opponent_set) {
  auto cert = strict_dominance_certificate(g, p, s, mix_support, opponent_set);
  if (!cert) return std::nullopt;
  return cert->mixture;
}

// The auxiliary zero-sum game of payoff margins over s0: rows are p's
// strategies with payoff pi(s, t) - pi(s0, t), columns are the opponent's
// strategies, and the column player's payoffs are the negation. Its value is
// positive exactly when s0 is strictly dominated.
inline Game pearce_auxiliary_game(const Game& g, Player p, int s0) {
  if (s0 < 0 || s0 >= g.n_strategies(p)) throw Error("pearce_auxiliary_game: unknown strategy");
  Game aux;
  aux.name = g.name + "_margins_" + g.strategy_name(p, s0);
  aux.strategies[0] = g.strategies[static_cast<std::size_t>(p)];
  aux.strategies[1] = g.strategies[static_cast<std::size_t>(other(p))];
  int rows = g.n_strategies(p), cols = g.n_strategies(other(p));
  aux.payoffs[0].assign(static_cast<std::size_t>(rows),
                        std::vector<Rational>(static_cast<std::size_t>(cols)));
  aux.payoffs[1] = aux.payoffs[0];
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Rational v = g.payoff_for(p, i, j) - g.payoff_for(p, s0, j);
      aux.payoffs[0][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      aux.payoffs[1][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -v;
    }
  return aux;
}

struct ZeroSumSolution {
  Belief row_mix;     // guarantees >= value against every column
  Belief column_mix;  // guarantees <= value against every row
  Rational value;
};

// Exact minimax solution of a zero-sum game by a pair of LPs; the primal and
// dual optima are asserted equal.
inline ZeroSumSolution solve_zero_sum(const Game& g) {
  int rows = g.n_strategies(kPlayer1), cols = g.n_strategies(kPlayer2);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (g.payoffs[0][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] !=
          -g.payoffs[1][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        throw Error("solve_zero_sum: game is not zero-sum");

  // Row player: maximize v st sum sigma = 1, sigma >= 0, per column j:
  // v - sum_i sigma_i A[i][j] <= 0.
  LinearSystem rp(rows + 1);
  {
    std::vector<Rational> ones(static_cast<std::size_t>(rows) + 1, Rational(1));
    ones.back() = 0;
    rp.add_eq(ones, Rational(1));
    for (int i = 0; i < rows; ++i) {
      std::vector<Rational> r(static_cast<std::size_t>(rows) + 1, Rational(0));
      r[static_cast<std::size_t>(i)] = -1;
      rp.add_le(std::move(r), Rational(0));
    }
    for (int j = 0; j < cols; ++j) {
      std::vector<Rational> r(static_cast<std::size_t>(rows) + 1);
      for (int i = 0; i < rows; ++i)
        r[static_cast<std::size_t>(i)] = -g.payoffs[0][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      r.back() = 1;
      rp.add_le(std::move(r), Rational(0));
    }
    std::vector<Rational> obj(static_cast<std::size_t>(rows) + 1, Rational(0));
    obj.back() = 1;
    rp.set_objective(obj);
  }
  LpResult rr = lp_optimize(rp);
  if (rr.status != LpStatus::Optimal) throw Error("zero-sum row program not optimal");

  // Column player: maximize -w st sum tau = 1, tau >= 0, per row i:
  // sum_j tau_j A[i][j] - w <= 0.
  LinearSystem cp(cols + 1);
  {
    std::vector<Rational> ones(static_cast<std::size_t>(cols) + 1, Rational(1));
    ones.back() = 0;
    cp.add_eq(ones, Rational(1));
    for (int j = 0; j < cols; ++j) {
      std::vector<Rational> r(static_cast<std::size_t>(cols) + 1, Rational(0));
      r[static_cast<std::size_t>(j)] = -1;
      cp.add_le(std::move(r), Rational(0));
    }
    for (int i = 0; i < rows; ++i) {
      std::vector<Rational> r(static_cast<std::size_t>(cols) + 1);
      for (int j = 0; j < cols; ++j)
        r[static_cast<std::size_t>(j)] = g.payoffs[0][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      r.back() = -1;
      cp.add_le(std::move(r), Rational(0));
    }
    std::vector<Rational> obj(static_cast<std::size_t>(cols) + 1, Rational(0));
    obj.back() = -1;
    cp.set_objective(obj);
  }
  LpResult cr = lp_optimize(cp);
  if (cr.status != LpStatus::Optimal) throw Error("zero-sum column program not optimal");

  Rational value = rr.optimum;
  if (-cr.optimum != value) throw Error("zero-sum duality gap; solver inconsistency");

  std::vector<Rational> sigma(rr.witness.begin(), rr.witness.end() - 1);
  std::vector<Rational> tau(cr.witness.begin(), cr.witness.end() - 1);
  return {witness_to_belief(sigma), witness_to_belief(tau), value};
}

}  // namespace egt
