#pragma once

#include <cstdint>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "egt/elimination.hpp"
#include "egt/game.hpp"
#include "egt/hierarchy.hpp"
#include "egt/response.hpp"

namespace egt {

// Order-stable parallel map over [0, n): results land by index regardless of
// scheduling. Every workload mapped here is a pure function of its index.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F fn, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<R> out(n);
  if (n == 0) return out;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = static_cast<std::size_t>(w) * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

// ---------------------------------------------------------------------------
// Desk-scale corpora: every strategic-form game over a small value grid.
// ---------------------------------------------------------------------------

inline Game make_matrix_game(std::string name, int rows, int cols,
                             const std::vector<Rational>& flat1,
                             const std::vector<Rational>& flat2) {
  Game g;
  g.name = std::move(name);
  for (int i = 0; i < rows; ++i) g.strategies[0].push_back("r" + std::to_string(i + 1));
  for (int j = 0; j < cols; ++j) g.strategies[1].push_back("c" + std::to_string(j + 1));
  for (Player p : {kPlayer1, kPlayer2}) {
    const auto& flat = p == kPlayer1 ? flat1 : flat2;
    if (static_cast<int>(flat.size()) != rows * cols)
      throw DimensionError("matrix literal has the wrong size");
    auto& mat = g.payoffs[static_cast<std::size_t>(p)];
    mat.assign(static_cast<std::size_t>(rows),
               std::vector<Rational>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            flat[static_cast<std::size_t>(i * cols + j)];
  }
  g.validate();
  return g;
}

// Decodes matrix index k (0 .. |values|^(rows*cols) - 1) into a payoff grid.
inline std::vector<Rational> decode_matrix(std::uint64_t k, int rows, int cols,
                                           const std::vector<Rational>& values) {
  std::vector<Rational> flat(static_cast<std::size_t>(rows * cols));
  for (int e = 0; e < rows * cols; ++e) {
    flat[static_cast<std::size_t>(e)] = values[static_cast<std::size_t>(k % values.size())];
    k /= values.size();
  }
  return flat;
}

inline std::uint64_t matrix_space_size(int rows, int cols, std::size_t n_values) {
  std::uint64_t total = 1;
  for (int e = 0; e < rows * cols; ++e) total *= n_values;
  return total;
}

// The exhaustive ordered pairing of every per-player matrix over the value
// grid: pair index k encodes (k / M, k % M) with M the matrix count.
inline Game exhaustive_pair_game(std::uint64_t k, int rows, int cols,
                                 const std::vector<Rational>& values) {
  std::uint64_t m = matrix_space_size(rows, cols, values.size());
  std::uint64_t k1 = k / m, k2 = k % m;
  return make_matrix_game("g" + std::to_string(rows) + "x" + std::to_string(cols) + "_" +
                              std::to_string(k),
                          rows, cols, decode_matrix(k1, rows, cols, values),
                          decode_matrix(k2, rows, cols, values));
}

inline Game sampled_game(std::uint64_t seed, int rows, int cols,
                         const std::vector<Rational>& values) {
  std::mt19937_64 rng(seed);
  auto draw = [&] {
    std::vector<Rational> flat(static_cast<std::size_t>(rows * cols));
    for (auto& v : flat) v = values[static_cast<std::size_t>(rng() % values.size())];
    return flat;
  };
  auto flat1 = draw();
  auto flat2 = draw();
  return make_matrix_game("s" + std::to_string(rows) + "x" + std::to_string(cols) + "_" +
                              std::to_string(seed),
                          rows, cols, flat1, flat2);
}

// ---------------------------------------------------------------------------
// Per-game verification bundle: the four elimination procedures coincide,
// never-best-response matches strict dominance strategy by strategy, the
// auxiliary zero-sum value is positive exactly on dominated strategies with
// the row mix an entrywise dominator, and every survivor's built hierarchy is
// hereditarily coherent and passes the local RCBR check at all depths.
// ---------------------------------------------------------------------------

struct FtReport {
  std::string game_name;
  bool concepts_agree = true;
  bool pearce_ok = true;
  bool zero_sum_ok = true;
  bool witness_ok = true;
  std::string detail;

  bool ok() const { return concepts_agree && pearce_ok && zero_sum_ok && witness_ok; }
};

inline FtReport verify_ft_game(const Game& g, int depth) {
  FtReport rep;
  rep.game_name = g.name;
  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    if (rep.detail.empty()) rep.detail = what;
  };

  EliminationTrace rat = eliminate(g, Concept::RAT);
  for (Concept c : {Concept::MRAT, Concept::IU, Concept::MIU}) {
    EliminationTrace t = eliminate(g, c);
    if (!(t.final_rectangle == rat.final_rectangle))
      fail(rep.concepts_agree, concept_name(c) + " fixpoint differs from RAT");
  }

  for (Player p : {kPlayer1, kPlayer2}) {
    for (int s = 0; s < g.n_strategies(p); ++s) {
      auto full_own = g.all_indices(p);
      auto full_opp = g.all_indices(other(p));
      auto belief = find_justifying_belief(g, p, s, full_opp, full_own);
      auto cert = strict_dominance_certificate(g, p, s, full_own, full_opp);
      if (belief.has_value() == cert.has_value()) {
        fail(rep.pearce_ok, "never-best-response and dominance disagree on " +
                                g.strategy_name(p, s) + " (player " + std::to_string(p + 1) + ")");
        continue;
      }
      if (belief && !is_best_response(g, p, s, *belief, full_own))
        fail(rep.pearce_ok, "justifier fails re-check on " + g.strategy_name(p, s));
      if (cert) {
        for (int t : full_opp)
          if (!(expected_payoff(g, p, cert->mixture, t) > expected_payoff(g, p, s, t)))
            fail(rep.pearce_ok, "dominating mixture fails re-substitution");
      }

      Game aux = pearce_auxiliary_game(g, p, s);
      ZeroSumSolution zs = solve_zero_sum(aux);
      if ((zs.value > Rational(0)) != cert.has_value())
        fail(rep.zero_sum_ok, "auxiliary value sign disagrees with dominance on " +
                                  g.strategy_name(p, s));
      // Exact guarantees: the row mix attains >= value in every column, the
      // column mix <= value in every row, both tight somewhere.
      Rational col_min, row_max;
      bool first = true;
      for (int j = 0; j < aux.n_strategies(kPlayer2); ++j) {
        Rational v = expected_payoff(aux, kPlayer1, zs.row_mix, j);
        if (first || v < col_min) col_min = v;
        first = false;
      }
      first = true;
      for (int i = 0; i < aux.n_strategies(kPlayer1); ++i) {
        Rational v = expected_payoff(aux, kPlayer1, i, zs.column_mix);
        if (first || v > row_max) row_max = v;
        first = false;
      }
      if (col_min != zs.value || row_max != zs.value)
        fail(rep.zero_sum_ok, "zero-sum guarantees are not tight on " + g.strategy_name(p, s));
      if (zs.value > Rational(0)) {
        for (int t = 0; t < g.n_strategies(other(p)); ++t)
          if (!(expected_payoff(g, p, zs.row_mix, t) > expected_payoff(g, p, s, t)))
            fail(rep.zero_sum_ok, "equilibrium row mix is not an entrywise dominator");
      }
    }
  }

  WitnessMap wm = build_witness(g, rat, depth);
  for (Player p : {kPlayer1, kPlayer2}) {
    for (int s : rat.final_rectangle.sides[static_cast<std::size_t>(p)]) {
      const WitnessEntry* e = wm.find(p, s);
      if (!e) {
        fail(rep.witness_ok, "survivor without witness: " + g.strategy_name(p, s));
        continue;
      }
      if (!check_hereditarily_coherent(e->hierarchy))
        fail(rep.witness_ok, "witness hierarchy not hereditarily coherent");
      for (int n = 1; n <= depth; ++n)
        if (!check_rcbr_star(g, p, s, e->hierarchy, n))
          fail(rep.witness_ok, "witness fails rcbr at level " + std::to_string(n) + " for " +
                                   g.strategy_name(p, s));
      // Graph concentration: level-(k+1) support points are exactly the
      // opponent witness graph.
      for (int k = 2; k <= depth; ++k) {
        for (const auto& [pt, w] : e->hierarchy.levels[static_cast<std::size_t>(k - 1)].entries()) {
          (void)w;
          const WitnessEntry* oe = wm.find(other(p), pt->strategy);
          if (!oe) {
            fail(rep.witness_ok, "witness support leaves the survivor graph");
            continue;
          }
          for (int l = 1; l <= k - 1; ++l)
            if (compare_hmeasures(pt->beliefs[static_cast<std::size_t>(l - 1)],
                                  oe->hierarchy.levels[static_cast<std::size_t>(l - 1)]) != 0)
              fail(rep.witness_ok, "witness support point is not the opponent's built prefix");
        }
      }
    }
  }
  return rep;
}

struct SweepSummary {
  std::size_t games = 0;
  std::size_t failures = 0;
  std::vector<FtReport> failed_reports;  // capped
};

template <class GameAt>
SweepSummary run_ft_sweep(std::size_t count, GameAt game_at, int depth, unsigned workers = 0,
                          std::size_t max_failures_kept = 5) {
  auto reports = parallel_map<FtReport>(
      count, [&](std::size_t i) { return verify_ft_game(game_at(i), depth); }, workers);
  SweepSummary summary;
  summary.games = count;
  for (auto& r : reports) {
    if (!r.ok()) {
      ++summary.failures;
      if (summary.failed_reports.size() < max_failures_kept) summary.failed_reports.push_back(r);
    }
  }
  return summary;
}

}  // namespace egt
