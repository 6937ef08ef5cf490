#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kep/ip_model.hpp"

namespace kep {

/// max c'x  s.t.  row_i(x) (<=,=,>=) rhs_i,  lower <= x <= upper.
/// Columns are stored sparse; bounds are supplied per solve so the same
/// problem serves every branch-and-bound node.
struct LpProblem {
  int num_rows = 0;
  std::vector<std::vector<std::pair<int, double>>> columns;  // (row, coefficient)
  std::vector<Relation> relations;
  std::vector<double> rhs;
  std::vector<double> objective;

  int num_cols() const { return static_cast<int>(columns.size()); }
  /// Continuous relaxation of a binary program.
  static LpProblem from_model(const IpModel& model);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, TimedOut };

/// Final basis of a solve, reusable as a warm start after bound changes.
/// Columns are structurals, then one slack and one artificial per row.
struct LpBasis {
  std::vector<int> basic;          // column basic in each row position
  std::vector<char> at_upper;      // per column; meaningful for nonbasic ones
  std::vector<double> artificial_sign;  // per row

  bool empty() const { return basic.empty(); }
};

/// Carries a basis over to a problem with rows appended; each new row starts
/// with its slack basic.
LpBasis extend_basis(const LpBasis& basis, int num_cols, int num_rows);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;  // structural columns only
  int iterations = 0;
  LpBasis basis;  // set when optimal
};

struct SimplexTolerances {
  double feasibility = 1e-9;
  double optimality = 1e-9;
  double pivot = 1e-9;
  // Give up with LpStatus::TimedOut once this point has passed.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Two-phase bounded-variable primal simplex with an explicit dense basis
/// inverse, refactorised periodically. Dantzig pricing, switching to Bland's
/// rule after a run of degenerate pivots. With `warm`, starts from that basis
/// and restores primal feasibility with dual simplex pivots first; this is
/// the fast path after a bound change. Falls back to a cold start if the warm
/// basis cannot be used.
LpSolution solve_lp(const LpProblem& lp, std::span<const double> lower, std::span<const double> upper,
                    const SimplexTolerances& tol = {}, const LpBasis* warm = nullptr);

}  // namespace kep
