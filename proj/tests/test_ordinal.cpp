#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "egt/ordinal.hpp"

using egt::Ordinal;

namespace {

Ordinal random_ordinal(std::mt19937_64& rng) {
  std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(rng() % 5 + 1));
  for (auto& c : coeffs) c = rng() % 6;
  return Ordinal::from_coeffs(coeffs);
}

}  // namespace

TEST_CASE("successor and comparison examples") {
  Ordinal w1_2 = Ordinal::omega_times_plus(1, 2);
  CHECK(w1_2.successor() == Ordinal::omega_times_plus(1, 3));
  CHECK(Ordinal::cmp(Ordinal::omega(), Ordinal::natural(5)) > 0);
  CHECK(Ordinal::cmp(Ordinal::omega(2), Ordinal::omega_times_plus(1, 100)) > 0);
  CHECK(Ordinal().successor() == Ordinal::natural(1));
  CHECK(Ordinal::natural(41).successor() == Ordinal::natural(42));
}

TEST_CASE("zero, limits and successors classify correctly") {
  CHECK(Ordinal().is_zero());
  CHECK(!Ordinal().is_limit());
  CHECK(Ordinal::omega().is_limit());
  CHECK(Ordinal::omega(2).is_limit());
  CHECK(Ordinal::omega_times_plus(1, 3).is_successor());
  CHECK(Ordinal::natural(7).is_successor());
  CHECK(Ordinal::natural(7).is_finite());
  CHECK(!Ordinal::omega().is_finite());
}

TEST_CASE("comparison is a total order: transitive and antisymmetric on random triples") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 3000; ++i) {
    Ordinal a = random_ordinal(rng), b = random_ordinal(rng), c = random_ordinal(rng);
    CHECK(((a < b) + (a == b) + (b < a)) == 1);
    if (a <= b && b <= a) CHECK(a == b);
    if (a < b && b < c) CHECK(a < c);
  }
}

TEST_CASE("successor is strictly increasing and minimal above") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = random_ordinal(rng);
    CHECK(a < a.successor());
    Ordinal b = random_ordinal(rng);
    if (a < b) CHECK(a.successor() <= b);
  }
}

TEST_CASE("text forms") {
  CHECK(Ordinal().str() == "0");
  CHECK(Ordinal::natural(3).str() == "3");
  CHECK(Ordinal::omega().str() == "w*1");
  CHECK(Ordinal::omega_times_plus(1, 3).str() == "w*1+3");
  CHECK(Ordinal::omega(2).str() == "w*2");
  CHECK(Ordinal::from_coeffs({2, 0, 3}).str() == "w^2*2+3");
  CHECK(Ordinal::parse("0") == Ordinal());
  CHECK(Ordinal::parse("w*1+3") == Ordinal::omega_times_plus(1, 3));
  CHECK(Ordinal::parse("w") == Ordinal::omega());
  CHECK(Ordinal::parse("w^2*2+3") == Ordinal::from_coeffs({2, 0, 3}));
  CHECK(Ordinal::parse("w^2") == Ordinal::from_coeffs({1, 0, 0}));
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    Ordinal a = random_ordinal(rng);
    CHECK(Ordinal::parse(a.str()) == a);
  }
  CHECK_THROWS_AS(Ordinal::parse(""), egt::Error);
  CHECK_THROWS_AS(Ordinal::parse("w^9*1"), egt::Error);
  CHECK_THROWS_AS(Ordinal::parse("1+w"), egt::Error);    // terms must descend
  CHECK_THROWS_AS(Ordinal::parse("w*0+1"), egt::Error);  // zero terms are omitted
  CHECK_THROWS_AS(Ordinal::parse("3/4"), egt::Error);
}

TEST_CASE("degree cap") {
  CHECK_NOTHROW(Ordinal::from_coeffs({1, 0, 0, 0, 0}));
  CHECK_THROWS_AS(Ordinal::from_coeffs({1, 0, 0, 0, 0, 0}), egt::Error);
  CHECK_THROWS_AS(Ordinal::omega(1, 5), egt::Error);
}
