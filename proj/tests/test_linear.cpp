#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "egt/linear.hpp"

using egt::LinearSystem;
using egt::LpStatus;
using egt::Rational;
using egt::Rel;

namespace {

// ---------------------------------------------------------------------------
// Independent oracle: brute-force vertex enumeration. Treats every size-n
// subset of constraints as equalities, solves by Gaussian elimination, keeps
// the feasible solutions, and maximizes the objective over them. Valid for
// systems whose feasible set is bounded (every such optimum sits at a vertex).
// ---------------------------------------------------------------------------

std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;  // singular
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    Rational inv = a[col][col].reciprocal();
    for (std::size_t j = 0; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) a[r][j] -= f * a[col][j];
      b[r] -= f * b[col];
    }
  }
  return b;
}

struct OracleResult {
  bool feasible = false;
  Rational best;  // max objective over feasible vertices
};

OracleResult vertex_oracle(const LinearSystem& sys) {
  const std::size_t n = static_cast<std::size_t>(sys.num_vars);
  const std::size_t m = sys.constraints.size();
  OracleResult out;
  std::vector<std::size_t> pick(n, 0);
  // enumerate all size-n subsets of rows
  std::vector<std::size_t> idx(n);
  auto consider = [&](const std::vector<std::size_t>& rows) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (auto r : rows) {
      a.push_back(sys.constraints[r].coeffs);
      b.push_back(sys.constraints[r].bound);
    }
    auto x = solve_square(a, b);
    if (!x || !sys.satisfied_by(*x)) return;
    Rational val = 0;
    if (sys.objective)
      for (std::size_t j = 0; j < n; ++j) val += (*sys.objective)[j] * (*x)[j];
    if (!out.feasible || val > out.best) out.best = val;
    out.feasible = true;
  };
  // recursive subset enumeration
  std::vector<std::size_t> rows;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (rows.size() == n) {
      consider(rows);
      return;
    }
    for (std::size_t r = start; r < m; ++r) {
      rows.push_back(r);
      rec(r + 1);
      rows.pop_back();
    }
  };
  rec(0);
  return out;
}

Rational rat(long long n, long long d = 1) { return Rational(n, d); }

}  // namespace

TEST_CASE("forced unique point") {
  LinearSystem sys(1);
  sys.add_le({rat(-1)}, rat(0));  // x >= 0
  sys.add_le({rat(1)}, rat(0));   // x <= 0
  auto w = egt::lp_feasible(sys);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == rat(0));
}

TEST_CASE("half-simplex witness verified by substitution") {
  LinearSystem sys(2);
  sys.add_eq({rat(1), rat(1)}, rat(1));
  sys.add_le({rat(-1), rat(0)}, rat(0));
  sys.add_le({rat(0), rat(-1)}, rat(0));
  sys.add_le({rat(-3), rat(3)}, rat(0));  // 3x >= 3y
  auto w = egt::lp_feasible(sys);
  REQUIRE(w.has_value());
  CHECK(sys.satisfied_by(*w));
  CHECK((*w)[0] >= rat(1, 2));
}

TEST_CASE("empty polytope via strict row") {
  LinearSystem sys(2);
  sys.add_eq({rat(1), rat(1)}, rat(1));
  sys.add_le({rat(-1), rat(0)}, rat(0));
  sys.add_le({rat(0), rat(-1)}, rat(0));
  sys.add_lt({rat(-1), rat(0)}, rat(-1));  // x > 1
  CHECK(!egt::lp_feasible(sys).has_value());
}

TEST_CASE("strict rows that are satisfiable produce an interior witness") {
  LinearSystem sys(2);
  sys.add_eq({rat(1), rat(1)}, rat(1));
  sys.add_lt({rat(-1), rat(0)}, rat(0));  // x > 0
  sys.add_lt({rat(0), rat(-1)}, rat(0));  // y > 0
  auto w = egt::lp_feasible(sys);
  REQUIRE(w.has_value());
  CHECK(sys.satisfied_by(*w));
  CHECK((*w)[0] > rat(0));
  CHECK((*w)[1] > rat(0));
}

TEST_CASE("optimize: bounded, unbounded, infeasible") {
  LinearSystem sys(1);
  sys.add_le({rat(1)}, rat(2, 3));
  sys.add_le({rat(-1)}, rat(0));
  sys.set_objective({rat(1)});
  auto r = egt::lp_optimize(sys);
  CHECK(r.status == LpStatus::Optimal);
  CHECK(r.optimum == rat(2, 3));
  CHECK(r.witness[0] == rat(2, 3));

  LinearSystem unb(1);
  unb.add_le({rat(-1)}, rat(0));
  unb.set_objective({rat(1)});
  CHECK(egt::lp_optimize(unb).status == LpStatus::Unbounded);

  LinearSystem inf(1);
  inf.add_le({rat(1)}, rat(-1));
  inf.add_le({rat(-1)}, rat(0));
  inf.set_objective({rat(1)});
  CHECK(egt::lp_optimize(inf).status == LpStatus::Infeasible);
}

// Independent oracle for the zero-sum dual example: the value of a zero-sum
// matrix with two columns equals the best over row subsets of size <= 2 of
// the closed-form subgame value (saddle point if one exists, otherwise
// (ad - bc) / (a + d - b - c)).
namespace {
Rational two_column_value(const std::vector<std::vector<Rational>>& m) {
  std::optional<Rational> best;
  auto upd = [&](const Rational& v) {
    if (!best || v > *best) best = v;
  };
  for (std::size_t i = 0; i < m.size(); ++i) upd(std::min(m[i][0], m[i][1]));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      Rational a = m[i][0], b = m[i][1], c = m[j][0], d = m[j][1];
      // saddle check on the 2x2 block
      Rational row_min_max = std::max(std::min(a, b), std::min(c, d));
      Rational col_max_min = std::min(std::max(a, c), std::max(b, d));
      if (row_min_max == col_max_min) {
        upd(row_min_max);
      } else {
        Rational denom = a + d - b - c;
        if (!denom.is_zero()) upd((a * d - b * c) / denom);
      }
    }
  return *best;
}
}  // namespace

TEST_CASE("dual constraints of the margin matrix reach the hand-computed value") {
  // maximize v st sigma in the simplex, per column: sum_i sigma_i M[i][col] >= v
  std::vector<std::vector<Rational>> m = {{rat(2), rat(-1)}, {rat(-1), rat(2)}, {rat(0), rat(0)}};
  CHECK(two_column_value(m) == rat(1, 2));  // oracle first

  LinearSystem sys(4);  // sigma_a sigma_b sigma_c v
  sys.add_eq({rat(1), rat(1), rat(1), rat(0)}, rat(1));
  for (int i = 0; i < 3; ++i) {
    std::vector<Rational> row(4, rat(0));
    row[static_cast<std::size_t>(i)] = rat(-1);
    sys.add_le(row, rat(0));
  }
  for (int col = 0; col < 2; ++col) {
    std::vector<Rational> row(4, rat(0));
    for (int i = 0; i < 3; ++i) row[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
    row[3] = rat(1);
    sys.add_le(row, rat(0));
  }
  sys.set_objective({rat(0), rat(0), rat(0), rat(1)});
  auto r = egt::lp_optimize(sys);
  CHECK(r.status == LpStatus::Optimal);
  CHECK(r.optimum == rat(1, 2));
}

TEST_CASE("witnesses re-substitute exactly and runs are deterministic") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    LinearSystem sys(n);
    int rows = 1 + static_cast<int>(rng() % 4);
    for (int r = 0; r < rows; ++r) {
      std::vector<Rational> c(static_cast<std::size_t>(n));
      for (auto& v : c) v = rat(static_cast<long long>(rng() % 7) - 3);
      sys.add(c, (rng() % 3 == 0) ? Rel::Eq : Rel::LessEq, rat(static_cast<long long>(rng() % 5)));
    }
    // box rows keep everything bounded
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> up(static_cast<std::size_t>(n), rat(0)), down(static_cast<std::size_t>(n), rat(0));
      up[static_cast<std::size_t>(j)] = rat(1);
      down[static_cast<std::size_t>(j)] = rat(-1);
      sys.add_le(up, rat(5));
      sys.add_le(down, rat(5));
    }
    auto w1 = egt::lp_feasible(sys);
    auto w2 = egt::lp_feasible(sys);
    CHECK(w1 == w2);
    if (w1) CHECK(sys.satisfied_by(*w1));
  }
}

TEST_CASE("optimize agrees with brute-force vertex enumeration on a bounded corpus") {
  std::mt19937_64 rng(424242);
  int compared = 0;
  for (int trial = 0; trial < 250; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);  // <= 3 variables
    LinearSystem sys(n);
    int extra = static_cast<int>(rng() % static_cast<std::uint64_t>(7 - 2 * n));
    for (int r = 0; r < extra; ++r) {
      std::vector<Rational> c(static_cast<std::size_t>(n));
      for (auto& v : c) v = rat(static_cast<long long>(rng() % 7) - 3);
      sys.add(c, (rng() % 4 == 0) ? Rel::Eq : Rel::LessEq,
              rat(static_cast<long long>(rng() % 6) - 1));
    }
    for (int j = 0; j < n; ++j) {  // bounding box, also part of the <= 6 row budget
      std::vector<Rational> up(static_cast<std::size_t>(n), rat(0)), down(static_cast<std::size_t>(n), rat(0));
      up[static_cast<std::size_t>(j)] = rat(1);
      down[static_cast<std::size_t>(j)] = rat(-1);
      sys.add_le(up, rat(4));
      sys.add_le(down, rat(4));
    }
    std::vector<Rational> obj(static_cast<std::size_t>(n));
    for (auto& v : obj) v = rat(static_cast<long long>(rng() % 5) - 2);
    sys.set_objective(obj);

    auto lp = egt::lp_optimize(sys);
    auto oracle = vertex_oracle(sys);
    CHECK(lp.status != LpStatus::Unbounded);  // boxed
    CHECK((lp.status == LpStatus::Optimal) == oracle.feasible);
    if (oracle.feasible) {
      CHECK(lp.optimum == oracle.best);
      CHECK(sys.satisfied_by(lp.witness));
      ++compared;
    }
  }
  CHECK(compared > 50);  // the corpus must actually exercise the comparison
}

TEST_CASE("dimension mismatches are rejected") {
  LinearSystem sys(2);
  CHECK_THROWS_AS(sys.add_le({rat(1)}, rat(0)), egt::DimensionError);
  CHECK_THROWS_AS(sys.set_objective({rat(1)}), egt::DimensionError);
  sys.add_le({rat(1), rat(0)}, rat(1));
  CHECK_THROWS_AS(sys.satisfied_by({rat(1)}), egt::DimensionError);
}

TEST_CASE("precondition guards") {
  LinearSystem with_obj(1);
  with_obj.add_le({rat(1)}, rat(1));
  with_obj.set_objective({rat(1)});
  CHECK_THROWS_AS(egt::lp_feasible(with_obj), egt::Error);

  LinearSystem strict_obj(1);
  strict_obj.add_lt({rat(1)}, rat(1));
  strict_obj.set_objective({rat(1)});
  CHECK_THROWS_AS(egt::lp_optimize(strict_obj), egt::Error);

  LinearSystem no_obj(1);
  no_obj.add_le({rat(1)}, rat(1));
  CHECK_THROWS_AS(egt::lp_optimize(no_obj), egt::Error);
}
