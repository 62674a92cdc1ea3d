#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "egt/ranked.hpp"

using egt::Ordinal;
using egt::RankedGame;
using egt::RankedSurvivors;

namespace {

std::vector<std::uint64_t> naturals_upto(std::uint64_t from, std::uint64_t n) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t k = from; k < n; ++k) v.push_back(k);
  return v;
}

// Every stage label of the trace paired with the survivor set recorded there.
std::vector<std::pair<Ordinal, std::vector<std::uint64_t>>> engine_stage_sets(
    const egt::EliminationTrace& t) {
  std::vector<std::pair<Ordinal, std::vector<std::uint64_t>>> out;
  for (const auto& stage : t.stages) {
    std::vector<std::uint64_t> side;
    for (int k : stage.survivors.sides[0]) side.push_back(static_cast<std::uint64_t>(k));
    out.emplace_back(stage.label, side);
  }
  return out;
}

}  // namespace

TEST_CASE("closed-form stage sets") {
  RankedGame identity{"naturals", 1, {0}, 16};
  CHECK(egt::ranked_stages(identity, Ordinal::natural(3)) == naturals_upto(3, 16));
  CHECK(egt::ranked_stages(identity, Ordinal()) == naturals_upto(0, 16));

  RankedGame lipman{"lipman", 2, {0, 1}, 16};
  CHECK(egt::ranked_stages(lipman, Ordinal::omega()) ==
        std::vector<std::uint64_t>{1, 3, 5, 7, 9, 11, 13, 15});
  CHECK(egt::ranked_stages(lipman, Ordinal()) == naturals_upto(0, 16));
  CHECK(egt::ranked_stages(lipman, lipman.bound()).empty());
  CHECK_THROWS_AS(egt::ranked_stages(lipman, Ordinal::omega(3)), egt::Error);
}

TEST_CASE("rank bookkeeping") {
  RankedGame lipman{"lipman", 2, {0, 1}, 64};
  CHECK(lipman.rank(0) == Ordinal());
  CHECK(lipman.rank(2) == Ordinal::natural(1));
  CHECK(lipman.rank(1) == Ordinal::omega());
  CHECK(lipman.rank(7) == Ordinal::omega_times_plus(1, 3));
  CHECK(lipman.bound() == Ordinal::omega(2));
  CHECK(lipman.least_with_rank(Ordinal::omega()) == 1);
  CHECK(lipman.least_with_rank(Ordinal::natural(5)) == 10);
}

TEST_CASE("justifiability criterion") {
  RankedGame identity{"naturals", 1, {0}, 32};
  // S = {n, n+1, ...}: nothing below n, so n is unjustifiable while n+1 is
  for (std::uint64_t n = 0; n < 6; ++n) {
    RankedSurvivors s{Ordinal::natural(n)};
    CHECK(!egt::ranked_justifiable(identity, n, s));
    CHECK(egt::ranked_justifiable(identity, n + 1, s));
  }
  RankedSurvivors empty{identity.bound()};
  CHECK_THROWS_AS(egt::ranked_justifiable(identity, 3, empty), egt::Error);

  RankedGame lipman{"lipman", 2, {0, 1}, 32};
  RankedSurvivors odds{Ordinal::omega()};  // stage-w set: the odd integers
  CHECK(!egt::ranked_justifiable(lipman, 1, odds));   // rank w, nothing below in S
  CHECK(egt::ranked_justifiable(lipman, 3, odds));    // rank w+1, witness rank w
  CHECK(!egt::ranked_justifiable(lipman, 14, odds));  // rank 7 < threshold
}

TEST_CASE("coefficient gaps are rejected") {
  RankedGame gap{"gap", 2, {0, 2}, 16};
  CHECK_THROWS_AS(gap.validate(), egt::Error);
  RankedGame ok{"ok", 3, {1, 0, 1}, 16};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("engine trace matches the closed form at every recorded ordinal") {
  for (int horizon : {32, 64}) {
    RankedGame identity{"naturals", 1, {0}, horizon};
    auto t = egt::eliminate_ranked(identity);
    CHECK(t.convergence_ordinal == Ordinal::omega());
    for (const auto& [gamma, side] : engine_stage_sets(t))
      CHECK(side == egt::ranked_stages(identity, gamma));
    CHECK(t.final_rectangle.sides[0].empty());

    RankedGame lipman{"lipman", 2, {0, 1}, horizon};
    auto tl = egt::eliminate_ranked(lipman);
    CHECK(tl.convergence_ordinal == Ordinal::omega(2));
    for (const auto& [gamma, side] : engine_stage_sets(tl))
      CHECK(side == egt::ranked_stages(lipman, gamma));
    // limit stages are explicit
    bool saw_limit = false;
    for (const auto& stage : tl.stages)
      if (stage.limit && stage.label == Ordinal::omega()) saw_limit = true;
    CHECK(saw_limit);
  }
}

TEST_CASE("elimination stages and ordinals line up") {
  RankedGame lipman{"lipman", 2, {0, 1}, 16};
  auto t = egt::eliminate_ranked(lipman);
  // integer k of rank psi(k) disappears at stage psi(k)+1
  for (std::uint64_t k = 0; k < 16; ++k) {
    auto stage = t.elimination_stage(egt::kPlayer1, static_cast<int>(k));
    REQUIRE(stage.has_value());
    CHECK(*stage == lipman.rank(k).successor());
  }
}

TEST_CASE("property: random contiguous schemes reproduce the closed form on every horizon >= 2m") {
  std::mt19937_64 rng(20240822);
  for (int trial = 0; trial < 25; ++trial) {
    int m = 1 + static_cast<int>(rng() % 3);
    std::uint64_t max_c = rng() % 3;
    std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(m));
    // contiguous coverage of 0..max_c, remaining residues drawn freely
    if (max_c >= static_cast<std::uint64_t>(m)) max_c = static_cast<std::uint64_t>(m) - 1;
    for (std::uint64_t c = 0; c <= max_c; ++c) coeffs[static_cast<std::size_t>(c)] = c;
    for (std::size_t r = static_cast<std::size_t>(max_c) + 1; r < coeffs.size(); ++r)
      coeffs[r] = rng() % (max_c + 1);
    int horizon = 2 * m + static_cast<int>(rng() % 20);
    RankedGame rg{"rnd", m, coeffs, horizon};
    REQUIRE_NOTHROW(rg.validate());

    auto t = egt::eliminate_ranked(rg);
    CHECK(t.convergence_ordinal == rg.bound());
    for (const auto& [gamma, side] : engine_stage_sets(t))
      CHECK(side == egt::ranked_stages(rg, gamma));
    CHECK(t.final_rectangle.sides[0].empty());
    CHECK(t.final_rectangle.sides[1].empty());
  }
}

TEST_CASE("ranked file round trip") {
  const char* text = "ranked-game lipman\nmodulus 2\ncoeffs 0 1\nhorizon 64\n";
  RankedGame rg = egt::parse_ranked_game(text);
  CHECK(rg.modulus == 2);
  CHECK(rg.coeffs == std::vector<std::uint64_t>{0, 1});
  CHECK(rg.horizon == 64);
  CHECK(egt::emit_ranked_game(rg) == text);
  CHECK_THROWS_AS(egt::parse_ranked_game("ranked-game x\nmodulus 2\ncoeffs 0 2\nhorizon 8\n"),
                  egt::Error);
  CHECK_THROWS_AS(egt::parse_ranked_game("modulus 2\n"), egt::ParseError);
}
