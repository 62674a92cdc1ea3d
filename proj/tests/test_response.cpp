#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "egt/response.hpp"
#include "egt/sweep.hpp"

using egt::Belief;
using egt::Game;
using egt::kPlayer1;
using egt::kPlayer2;
using egt::Rational;

namespace {

Game pd() {
  return egt::parse_game(
      "game pd\nstrategies 1 C D\nstrategies 2 C D\n"
      "payoffs 1\n2 0\n3 1\npayoffs 2\n2 3\n0 1\n");
}

Game matching_pennies() {
  return egt::parse_game(
      "game mp\nstrategies 1 H T\nstrategies 2 H T\n"
      "payoffs 1\n1 -1\n-1 1\npayoffs 2\n-1 1\n1 -1\n");
}

Game cascade() {
  return egt::parse_game(
      "game cascade\nstrategies 1 a b\nstrategies 2 x y\n"
      "payoffs 1\n1 0\n0 2\npayoffs 2\n1 0\n1 0\n");
}

Game mixdom() {
  return egt::parse_game(
      "game mixdom\nstrategies 1 a b c\nstrategies 2 x y\n"
      "payoffs 1\n3 0\n0 3\n1 1\npayoffs 2\n0 0\n0 0\n0 0\n");
}

Belief uniform(int n) {
  std::vector<Belief::Entry> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, Rational(1, n));
  return Belief::from_entries(std::move(e));
}

}  // namespace

TEST_CASE("matching pennies: H is a best response to the uniform belief") {
  Game g = matching_pennies();
  CHECK(egt::is_best_response(g, kPlayer1, 0, uniform(2)));
}

TEST_CASE("prisoner's dilemma: C is never a best response") {
  Game g = pd();
  for (const Belief& mu : {Belief::dirac(0), Belief::dirac(1), uniform(2)})
    CHECK(!egt::is_best_response(g, kPlayer1, 0, mu));
}

TEST_CASE("the column argmax is always a best reply to the matching Dirac") {
  std::mt19937_64 rng(20240814);
  for (int trial = 0; trial < 100; ++trial) {
    Game g = egt::sampled_game(rng(), 3, 3, {Rational(0), Rational(1), Rational(2), Rational(1, 2)});
    for (int p = 0; p < 2; ++p) {
      for (int t = 0; t < g.n_strategies(egt::other(p)); ++t) {
        int best = 0;
        for (int s = 1; s < g.n_strategies(p); ++s)
          if (g.payoff_for(p, s, t) > g.payoff_for(p, best, t)) best = s;
        CHECK(egt::is_best_response(g, p, best, Belief::dirac(t)));
      }
    }
  }
}

TEST_CASE("justifying beliefs in the cascade game") {
  Game g = cascade();
  std::vector<int> both{0, 1};
  // b against {x,y}: feasible, and the canonical witness re-checks
  auto mu = egt::find_justifying_belief(g, kPlayer1, 1, both, both);
  REQUIRE(mu.has_value());
  CHECK(egt::is_best_response(g, kPlayer1, 1, *mu, both));
  // the defining inequality 2 mu(y) >= mu(x)
  CHECK(Rational(2) * mu->weight_of(1) >= mu->weight_of(0));
  // b against {x} only: none (payoff 0 < 1 = a's)
  CHECK(!egt::find_justifying_belief(g, kPlayer1, 1, {0}, both).has_value());
  // PD: C has no justifier at all
  Game p = pd();
  CHECK(!egt::find_justifying_belief(p, kPlayer1, 0, {0, 1}, {0, 1}).has_value());
  CHECK_THROWS_AS(egt::find_justifying_belief(p, kPlayer1, 0, {}, {0, 1}), egt::Error);
}

TEST_CASE("strict dominance certificates") {
  Game p = pd();
  auto dom = egt::strict_dominance_certificate(p, kPlayer1, 0, {0, 1}, {0, 1});
  REQUIRE(dom.has_value());
  CHECK(egt::same_measure(dom->mixture, Belief::dirac(1)));
  CHECK(dom->margin == Rational(1));

  Game m = mixdom();
  auto mixed = egt::strict_dominance_certificate(m, kPlayer1, 2, {0, 1, 2}, {0, 1});
  REQUIRE(mixed.has_value());
  CHECK(egt::same_measure(mixed->mixture,
                          Belief::from_entries({{0, Rational(1, 2)}, {1, Rational(1, 2)}})));
  CHECK(mixed->margin == Rational(1, 2));

  Game mp = matching_pennies();
  CHECK(!egt::is_strictly_dominated(mp, kPlayer1, 0, {0, 1}, {0, 1}).has_value());
}

TEST_CASE("pearce auxiliary game construction") {
  Game m = mixdom();
  Game aux = egt::pearce_auxiliary_game(m, kPlayer1, 2);
  CHECK(aux.payoffs[0] == std::vector<std::vector<Rational>>{
                              {Rational(2), Rational(-1)}, {Rational(-1), Rational(2)}, {Rational(0), Rational(0)}});
  for (std::size_t i = 0; i < aux.payoffs[0].size(); ++i)
    for (std::size_t j = 0; j < aux.payoffs[0][i].size(); ++j)
      CHECK(aux.payoffs[1][i][j] == -aux.payoffs[0][i][j]);

  Game p = pd();
  Game paux = egt::pearce_auxiliary_game(p, kPlayer1, 0);
  CHECK(paux.payoffs[0] == std::vector<std::vector<Rational>>{{Rational(0), Rational(0)},
                                                              {Rational(1), Rational(1)}});

  Game constant = egt::make_matrix_game("const", 2, 2, {Rational(5), Rational(5), Rational(5), Rational(5)},
                                        {Rational(0), Rational(0), Rational(0), Rational(0)});
  Game caux = egt::pearce_auxiliary_game(constant, kPlayer1, 1);
  for (const auto& row : caux.payoffs[0])
    for (const auto& v : row) CHECK(v == Rational(0));
}

TEST_CASE("zero-sum solutions are exact") {
  Game m = mixdom();
  Game aux = egt::pearce_auxiliary_game(m, kPlayer1, 2);
  auto zs = egt::solve_zero_sum(aux);
  CHECK(zs.value == Rational(1, 2));
  CHECK(egt::same_measure(zs.row_mix,
                          Belief::from_entries({{0, Rational(1, 2)}, {1, Rational(1, 2)}})));

  Game mp = matching_pennies();
  auto mps = egt::solve_zero_sum(mp);
  CHECK(mps.value == Rational(0));
  CHECK(egt::same_measure(mps.row_mix, Belief::from_entries({{0, Rational(1, 2)}, {1, Rational(1, 2)}})));
  CHECK(egt::same_measure(mps.column_mix, Belief::from_entries({{0, Rational(1, 2)}, {1, Rational(1, 2)}})));

  Game zero = egt::make_matrix_game("zero", 2, 2, {Rational(0), Rational(0), Rational(0), Rational(0)},
                                    {Rational(0), Rational(0), Rational(0), Rational(0)});
  auto zsol = egt::solve_zero_sum(zero);
  CHECK(zsol.value == Rational(0));
  // guarantees hold for whatever mixes came back
  for (int j = 0; j < 2; ++j) CHECK(egt::expected_payoff(zero, kPlayer1, zsol.row_mix, j) >= zsol.value);
  for (int i = 0; i < 2; ++i) CHECK(egt::expected_payoff(zero, kPlayer1, i, zsol.column_mix) <= zsol.value);

  CHECK_THROWS_AS(egt::solve_zero_sum(pd()), egt::Error);
}

TEST_CASE("zero-sum guarantees are tight: min column = value = max row") {
  std::mt19937_64 rng(20240815);
  for (int trial = 0; trial < 60; ++trial) {
    Game g = egt::sampled_game(rng(), 3, 3, {Rational(-2), Rational(-1), Rational(0), Rational(1), Rational(2)});
    // zero-sum version of the sampled payoffs
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) g.payoffs[1][i][j] = -g.payoffs[0][i][j];
    auto zs = egt::solve_zero_sum(g);
    Rational col_min, row_max;
    for (int j = 0; j < 3; ++j) {
      Rational v = egt::expected_payoff(g, kPlayer1, zs.row_mix, j);
      if (j == 0 || v < col_min) col_min = v;
    }
    for (int i = 0; i < 3; ++i) {
      Rational v = egt::expected_payoff(g, kPlayer1, i, zs.column_mix);
      if (i == 0 || v > row_max) row_max = v;
    }
    CHECK(col_min == zs.value);
    CHECK(row_max == zs.value);
  }
}

TEST_CASE("pearce equivalence and the zero-sum bridge on a random corpus") {
  std::mt19937_64 rng(20240816);
  for (int trial = 0; trial < 80; ++trial) {
    int rows = 2 + static_cast<int>(rng() % 2), cols = 2 + static_cast<int>(rng() % 2);
    Game g = egt::sampled_game(rng(), rows, cols, {Rational(0), Rational(1), Rational(2)});
    for (int p = 0; p < 2; ++p) {
      for (int s = 0; s < g.n_strategies(p); ++s) {
        auto belief = egt::find_justifying_belief(g, p, s, g.all_indices(egt::other(p)), g.all_indices(p));
        auto cert = egt::strict_dominance_certificate(g, p, s, g.all_indices(p), g.all_indices(egt::other(p)));
        CHECK(belief.has_value() != cert.has_value());

        auto zs = egt::solve_zero_sum(egt::pearce_auxiliary_game(g, p, s));
        CHECK((zs.value > Rational(0)) == cert.has_value());
        if (zs.value > Rational(0)) {
          for (int t = 0; t < g.n_strategies(egt::other(p)); ++t)
            CHECK(egt::expected_payoff(g, p, zs.row_mix, t) > egt::expected_payoff(g, p, s, t));
        }
        if (cert) {
          for (int t = 0; t < g.n_strategies(egt::other(p)); ++t)
            CHECK(egt::expected_payoff(g, p, cert->mixture, t) > egt::expected_payoff(g, p, s, t));
        }
      }
    }
  }
}

TEST_CASE("polyhedron membership coincides with the best-response predicate") {
  std::mt19937_64 rng(20240829);
  for (int trial = 0; trial < 60; ++trial) {
    Game g = egt::sampled_game(rng(), 3, 3, {Rational(0), Rational(1), Rational(2)});
    int p = static_cast<int>(rng() % 2);
    int s = static_cast<int>(rng() % 3);
    // random restriction and alternatives
    std::vector<int> restriction, alternatives;
    for (int t = 0; t < g.n_strategies(egt::other(p)); ++t)
      if (rng() % 2) restriction.push_back(t);
    if (restriction.empty()) restriction.push_back(0);
    for (int t = 0; t < g.n_strategies(p); ++t)
      if (rng() % 2) alternatives.push_back(t);
    auto poly = egt::belief_polyhedron(g, p, s, restriction, alternatives);

    for (int k = 0; k < 10; ++k) {
      // random belief over a random support subset of the opponent list
      std::vector<int> support;
      for (int t = 0; t < g.n_strategies(egt::other(p)); ++t)
        if (rng() % 2) support.push_back(t);
      if (support.empty()) support.push_back(static_cast<int>(rng() % 3));
      std::vector<Belief::Entry> entries;
      long long total = 0;
      std::vector<long long> w(support.size());
      for (auto& v : w) {
        v = 1 + static_cast<long long>(rng() % 5);
        total += v;
      }
      for (std::size_t i = 0; i < support.size(); ++i)
        entries.emplace_back(support[i], Rational(w[i], total));
      Belief mu = Belief::from_entries(std::move(entries));

      std::vector<Rational> x(3, Rational(0));
      for (const auto& [t, weight] : mu.entries()) x[static_cast<std::size_t>(t)] = weight;
      bool in_poly = poly.system.satisfied_by(x);
      bool expected = egt::is_best_response(g, p, s, mu, alternatives) &&
                      mu.concentrated_on(restriction);
      CHECK(in_poly == expected);
    }
  }
}

TEST_CASE("canonical justifying beliefs are deterministic") {
  Game g = matching_pennies();
  for (int rep = 0; rep < 3; ++rep) {
    auto a = egt::find_justifying_belief(g, kPlayer1, 0, {0, 1}, {0, 1});
    auto b = egt::find_justifying_belief(g, kPlayer1, 0, {0, 1}, {0, 1});
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(egt::same_measure(*a, *b));
  }
}
