#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "egt/error.hpp"
#include "egt/rational.hpp"

namespace egt {

// Relation of one linear constraint. Strict rows appear only in feasibility
// queries, never together with an objective.
enum class Rel { LessEq, Eq, Less };

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Rel rel = Rel::LessEq;
  Rational bound;
};

// A system of linear constraints over `num_vars` free variables, with an
// optional maximisation objective. This is the carrier for every belief
// polyhedron and zero-sum program in the toolkit.
struct LinearSystem {
  int num_vars = 0;
  std::vector<LinearConstraint> constraints;
  std::optional<std::vector<Rational>> objective;

  explicit LinearSystem(int n = 0) : num_vars(n) {}

  void add(std::vector<Rational> coeffs, Rel rel, Rational bound) {
    if (static_cast<int>(coeffs.size()) != num_vars)
      throw DimensionError("constraint has " + std::to_string(coeffs.size()) +
                           " coefficients, system has " + std::to_string(num_vars) +
                           " variables");
    constraints.push_back({std::move(coeffs), rel, std::move(bound)});
  }
  void add_le(std::vector<Rational> c, Rational b) { add(std::move(c), Rel::LessEq, std::move(b)); }
  void add_eq(std::vector<Rational> c, Rational b) { add(std::move(c), Rel::Eq, std::move(b)); }
  void add_lt(std::vector<Rational> c, Rational b) { add(std::move(c), Rel::Less, std::move(b)); }

  void set_objective(std::vector<Rational> c) {
    if (static_cast<int>(c.size()) != num_vars)
      throw DimensionError("objective has " + std::to_string(c.size()) +
                           " coefficients, system has " + std::to_string(num_vars) +
                           " variables");
    objective = std::move(c);
  }

  bool has_strict() const {
    for (const auto& c : constraints)
      if (c.rel == Rel::Less) return true;
    return false;
  }

  // Exact membership test of a candidate point.
  bool satisfied_by(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != num_vars)
      throw DimensionError("point dimension mismatch");
    for (const auto& c : constraints) {
      Rational lhs = 0;
      for (int j = 0; j < num_vars; ++j) lhs += c.coeffs[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      switch (c.rel) {
        case Rel::LessEq: if (!(lhs <= c.bound)) return false; break;
        case Rel::Eq:     if (!(lhs == c.bound)) return false; break;
        case Rel::Less:   if (!(lhs < c.bound)) return false; break;
      }
    }
    return true;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational optimum;               // meaningful only when status == Optimal
  std::vector<Rational> witness;  // attains the optimum exactly
};

namespace detail {

// Dense two-phase primal simplex over exact rationals with Bland's rule
// (lowest-index entering and leaving variable). Free variables are split as
// x = u - v with u, v >= 0. Determinism of the pivot order is what makes the
// witnesses canonical for the rest of the toolkit.
class Simplex {
 public:
  // Solves: maximize c.x subject to the LessEq/Eq rows of `sys`, x free.
  // Strict rows must have been transformed away by the caller.
  static LpResult run(const LinearSystem& sys, const std::vector<Rational>& c) {
    Simplex s(sys);
    return s.solve(c);
  }

 private:
  explicit Simplex(const LinearSystem& sys) : n_(sys.num_vars) {
    // Columns: u_0..u_{n-1}, v_0..v_{n-1}, then slacks, then artificials.
    int m = static_cast<int>(sys.constraints.size());
    int slack_count = 0;
    for (const auto& con : sys.constraints)
      if (con.rel == Rel::LessEq) ++slack_count;
    cols_structural_ = 2 * n_ + slack_count;

    rows_.reserve(static_cast<std::size_t>(m));
    int slack_at = 2 * n_;
    for (const auto& con : sys.constraints) {
      if (con.rel == Rel::Less) throw Error("strict row reached the simplex core");
      Row row;
      row.a.assign(static_cast<std::size_t>(cols_structural_), Rational(0));
      for (int j = 0; j < n_; ++j) {
        row.a[static_cast<std::size_t>(j)] = con.coeffs[static_cast<std::size_t>(j)];
        row.a[static_cast<std::size_t>(n_ + j)] = -con.coeffs[static_cast<std::size_t>(j)];
      }
      row.rhs = con.bound;
      if (con.rel == Rel::LessEq) {
        row.a[static_cast<std::size_t>(slack_at)] = 1;
        row.slack = slack_at;
        ++slack_at;
      }
      if (row.rhs < Rational(0)) {
        for (auto& v : row.a) v = -v;
        row.rhs = -row.rhs;
        row.slack_flipped = true;
      }
      rows_.push_back(std::move(row));
    }
  }

  struct Row {
    std::vector<Rational> a;
    Rational rhs;
    int slack = -1;
    bool slack_flipped = false;
  };

  LpResult solve(const std::vector<Rational>& c) {
    const int m = static_cast<int>(rows_.size());
    // A LessEq row whose slack kept coefficient +1 can start basic; every
    // other row gets an artificial column.
    int total = cols_structural_;
    basis_.assign(static_cast<std::size_t>(m), -1);
    std::vector<int> artificial_rows;
    for (int i = 0; i < m; ++i) {
      if (rows_[static_cast<std::size_t>(i)].slack >= 0 && !rows_[static_cast<std::size_t>(i)].slack_flipped)
        basis_[static_cast<std::size_t>(i)] = rows_[static_cast<std::size_t>(i)].slack;
      else
        artificial_rows.push_back(i);
    }
    first_artificial_ = total;
    total += static_cast<int>(artificial_rows.size());

    tab_.assign(static_cast<std::size_t>(m),
                std::vector<Rational>(static_cast<std::size_t>(total) + 1, Rational(0)));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < cols_structural_; ++j)
        tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rows_[static_cast<std::size_t>(i)].a[static_cast<std::size_t>(j)];
      tab_[static_cast<std::size_t>(i)].back() = rows_[static_cast<std::size_t>(i)].rhs;
    }
    for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
      int i = artificial_rows[k];
      int col = first_artificial_ + static_cast<int>(k);
      tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] = 1;
      basis_[static_cast<std::size_t>(i)] = col;
    }
    ncols_ = total;

    // Phase-1 objective: maximize -(sum of artificials). z-row in (z_j - c_j)
    // form: +1 on artificial columns, then price out the artificial basics.
    z1_.assign(static_cast<std::size_t>(ncols_) + 1, Rational(0));
    for (int j = first_artificial_; j < ncols_; ++j) z1_[static_cast<std::size_t>(j)] = 1;
    for (int i = 0; i < m; ++i)
      if (basis_[static_cast<std::size_t>(i)] >= first_artificial_) axpy_(z1_, Rational(-1), tab_[static_cast<std::size_t>(i)]);

    // Phase-2 row: z_j - c_j with the initial (cost-0) basis.
    z2_.assign(static_cast<std::size_t>(ncols_) + 1, Rational(0));
    for (int j = 0; j < n_; ++j) {
      z2_[static_cast<std::size_t>(j)] = -c[static_cast<std::size_t>(j)];
      z2_[static_cast<std::size_t>(n_ + j)] = c[static_cast<std::size_t>(j)];
    }

    if (!artificial_rows.empty()) {
      pivot_until_optimal_(z1_, /*allow_artificial=*/true);
      if (z1_.back() < Rational(0)) return {LpStatus::Infeasible, Rational(0), {}};
      purge_artificials_();
    }

    bool bounded = pivot_until_optimal_(z2_, /*allow_artificial=*/false);
    if (!bounded) return {LpStatus::Unbounded, Rational(0), {}};

    std::vector<Rational> y(static_cast<std::size_t>(cols_structural_), Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] >= 0 && basis_[i] < cols_structural_)
        y[static_cast<std::size_t>(basis_[i])] = tab_[i].back();
    std::vector<Rational> x(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
      x[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(n_ + j)];
    return {LpStatus::Optimal, z2_.back(), std::move(x)};
  }

  static void axpy_(std::vector<Rational>& dst, const Rational& f, const std::vector<Rational>& src) {
    for (std::size_t j = 0; j < dst.size(); ++j)
      if (!src[j].is_zero()) dst[j] += f * src[j];
  }

  void pivot_(int prow, int pcol) {
    auto& row = tab_[static_cast<std::size_t>(prow)];
    Rational inv = row[static_cast<std::size_t>(pcol)].reciprocal();
    for (auto& v : row) v *= inv;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (static_cast<int>(i) == prow) continue;
      Rational f = tab_[i][static_cast<std::size_t>(pcol)];
      if (!f.is_zero()) axpy_(tab_[i], -f, row);
    }
    if (!z1_[static_cast<std::size_t>(pcol)].is_zero()) axpy_(z1_, -z1_[static_cast<std::size_t>(pcol)], row);
    if (!z2_[static_cast<std::size_t>(pcol)].is_zero()) axpy_(z2_, -z2_[static_cast<std::size_t>(pcol)], row);
    basis_[static_cast<std::size_t>(prow)] = pcol;
  }

  // Returns false when the objective is unbounded above.
  bool pivot_until_optimal_(std::vector<Rational>& z, bool allow_artificial) {
    const int limit = allow_artificial ? ncols_ : first_artificial_;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (z[static_cast<std::size_t>(j)] < Rational(0)) { enter = j; break; }  // Bland: lowest index
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best_ratio;
      for (std::size_t i = 0; i < tab_.size(); ++i) {
        const Rational& piv = tab_[i][static_cast<std::size_t>(enter)];
        if (piv > Rational(0)) {
          Rational ratio = tab_[i].back() / piv;
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis_[i] < basis_[static_cast<std::size_t>(leave)])) {
            leave = static_cast<int>(i);
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot_(leave, enter);
    }
  }

  // After a feasible phase 1, pivot artificial variables out of the basis or
  // drop redundant rows so that phase 2 can never re-activate them.
  void purge_artificials_() {
    for (std::size_t i = 0; i < tab_.size();) {
      if (basis_[i] < first_artificial_) { ++i; continue; }
      int col = -1;
      for (int j = 0; j < first_artificial_; ++j)
        if (!tab_[i][static_cast<std::size_t>(j)].is_zero()) { col = j; break; }
      if (col >= 0) {
        pivot_(static_cast<int>(i), col);
        ++i;
      } else {
        tab_.erase(tab_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
      }
    }
  }

  int n_;
  int cols_structural_ = 0;
  int first_artificial_ = 0;
  int ncols_ = 0;
  std::vector<Row> rows_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<int> basis_;
  std::vector<Rational> z1_, z2_;
};

}  // namespace detail

// Decides feasibility. Strict rows are reduced to "maximize the minimum
// slack, bounded by 1, and require the optimum be positive"; the witness is
// the optimal point with the margin variable dropped. Deterministic: the
// same system always yields the same witness.
inline std::optional<std::vector<Rational>> lp_feasible(const LinearSystem& sys) {
  if (sys.objective) throw Error("lp_feasible: system must not carry an objective");
  if (!sys.has_strict()) {
    LpResult r = detail::Simplex::run(sys, std::vector<Rational>(static_cast<std::size_t>(sys.num_vars), Rational(0)));
    if (r.status != LpStatus::Optimal) return std::nullopt;
    return r.witness;
  }
  // Margin formulation over (x, t): strict rows a.x < b become a.x + t <= b,
  // plus t <= 1; maximize t.
  LinearSystem aug(sys.num_vars + 1);
  for (const auto& con : sys.constraints) {
    std::vector<Rational> c = con.coeffs;
    c.push_back(con.rel == Rel::Less ? Rational(1) : Rational(0));
    aug.add(std::move(c), con.rel == Rel::Eq ? Rel::Eq : Rel::LessEq, con.bound);
  }
  std::vector<Rational> cap(static_cast<std::size_t>(sys.num_vars) + 1, Rational(0));
  cap.back() = 1;
  aug.add_le(cap, Rational(1));
  std::vector<Rational> obj(static_cast<std::size_t>(sys.num_vars) + 1, Rational(0));
  obj.back() = 1;
  LpResult r = detail::Simplex::run(aug, obj);
  if (r.status == LpStatus::Unbounded) throw Error("margin program cannot be unbounded");
  if (r.status != LpStatus::Optimal || !(r.optimum > Rational(0))) return std::nullopt;
  r.witness.pop_back();
  return r.witness;
}

// Maximises the system's objective. Requires an objective and no strict rows.
inline LpResult lp_optimize(const LinearSystem& sys) {
  if (!sys.objective) throw Error("lp_optimize: system has no objective");
  if (sys.has_strict()) throw Error("lp_optimize: strict rows are not allowed with an objective");
  return detail::Simplex::run(sys, *sys.objective);
}

}  // namespace egt
