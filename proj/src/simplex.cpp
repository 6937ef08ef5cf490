#include "kep/simplex.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

namespace kep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefactorInterval = 100;
constexpr int kDegenerateRunBeforeBland = 50;
constexpr double kCostPerturbation = 1e-7;

class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& lp, std::span<const double> lower, std::span<const double> upper,
                 const SimplexTolerances& tol)
      : lp_(lp), tol_(tol), m_(lp.num_rows), n_(lp.num_cols()) {
    // Columns: structurals [0,n), slacks [n,n+m), artificials [n+m,n+2m).
    const int total = n_ + 2 * m_;
    lb_.assign(static_cast<std::size_t>(total), 0.0);
    ub_.assign(static_cast<std::size_t>(total), 0.0);
    x_.assign(static_cast<std::size_t>(total), 0.0);
    at_upper_.assign(static_cast<std::size_t>(total), 0);
    row_of_.assign(static_cast<std::size_t>(total), -1);
    art_sign_.assign(static_cast<std::size_t>(m_), 1.0);
    for (int j = 0; j < n_; ++j) {
      lb_[j] = lower[static_cast<std::size_t>(j)];
      ub_[j] = upper[static_cast<std::size_t>(j)];
      x_[j] = lb_[j];
    }
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      switch (lp.relations[static_cast<std::size_t>(i)]) {
        case Relation::LessEqual: lb_[s] = 0.0; ub_[s] = kInf; break;
        case Relation::GreaterEqual: lb_[s] = -kInf; ub_[s] = 0.0; break;
        case Relation::Equal: lb_[s] = 0.0; ub_[s] = 0.0; break;
      }
      lb_[n_ + m_ + i] = 0.0;
      ub_[n_ + m_ + i] = 0.0;  // artificials stay out unless needed
    }
  }

  LpSolution run() {
    LpSolution out;
    // Row residuals with every structural at its starting bound.
    std::vector<double> residual(lp_.rhs);
    for (int j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (auto [r, a] : lp_.columns[static_cast<std::size_t>(j)]) residual[static_cast<std::size_t>(r)] -= a * x_[j];
    }
    basis_.assign(static_cast<std::size_t>(m_), -1);
    bool need_phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      const double r = residual[static_cast<std::size_t>(i)];
      if (r >= lb_[s] - tol_.feasibility && r <= ub_[s] + tol_.feasibility) {
        set_basic(i, s, r);
      } else {
        const double clamp = r < lb_[s] ? lb_[s] : ub_[s];
        x_[s] = clamp;
        at_upper_[s] = clamp == ub_[s] && clamp != lb_[s];
        const int art = n_ + m_ + i;
        art_sign_[static_cast<std::size_t>(i)] = r > clamp ? 1.0 : -1.0;
        ub_[art] = kInf;
        set_basic(i, art, std::abs(r - clamp));
        need_phase1 = true;
      }
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = 1.0 / column_entry_diag(basis_[i], i);

    cost_.assign(static_cast<std::size_t>(n_ + 2 * m_), 0.0);
    if (need_phase1) {
      for (int i = 0; i < m_; ++i) cost_[n_ + m_ + i] = -1.0;
      if (const auto st = iterate(out.iterations); st != LpStatus::Optimal) {
        out.status = st;
        return out;
      }
      double infeasibility = 0.0;
      for (int i = 0; i < m_; ++i) infeasibility += x_[n_ + m_ + i];
      if (infeasibility > 1e-7) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i) {
        const int art = n_ + m_ + i;
        ub_[art] = 0.0;
        if (row_of_[art] < 0) {
          x_[art] = 0.0;
          at_upper_[art] = 0;
        }
      }
      std::fill(cost_.begin(), cost_.end(), 0.0);
    }
    for (int j = 0; j < n_; ++j) cost_[j] = lp_.objective[static_cast<std::size_t>(j)];
    return finish(out);
  }

  // Starts from `warm`; nullopt means the caller should start cold.
  std::optional<LpSolution> run_warm(const LpBasis& warm) {
    const int total = n_ + 2 * m_;
    if (static_cast<int>(warm.basic.size()) != m_ || static_cast<int>(warm.at_upper.size()) != total ||
        static_cast<int>(warm.artificial_sign.size()) != m_) {
      return std::nullopt;
    }
    basis_ = warm.basic;
    art_sign_ = warm.artificial_sign;
    std::fill(row_of_.begin(), row_of_.end(), -1);
    for (int i = 0; i < m_; ++i) {
      const int col = basis_[static_cast<std::size_t>(i)];
      if (col < 0 || col >= total || row_of_[col] >= 0) return std::nullopt;
      row_of_[col] = i;
    }
    for (int j = 0; j < total; ++j) {
      at_upper_[j] = 0;
      if (row_of_[j] >= 0) continue;
      const bool upper = warm.at_upper[static_cast<std::size_t>(j)] ? ub_[j] < kInf : lb_[j] == -kInf;
      x_[j] = upper ? ub_[j] : lb_[j];
      at_upper_[j] = upper && lb_[j] != ub_[j];
    }
    try {
      refactor();
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
    // Perturbed costs break the dual ties that otherwise stall the dual
    // simplex; finish() restores the true costs and cleans up with primal.
    cost_.assign(static_cast<std::size_t>(total), 0.0);
    for (int j = 0; j < total; ++j) {
      if (row_of_[j] >= 0 || !(ub_[j] > lb_[j])) continue;
      std::uint64_t h = static_cast<std::uint64_t>(j + 1) * 0x9E3779B97F4A7C15ULL;
      h ^= h >> 31;
      const double eps = kCostPerturbation * (1.0 + static_cast<double>(h % 1024) / 1024.0);
      cost_[j] = at_upper_[j] ? eps : -eps;
    }
    for (int j = 0; j < n_; ++j) cost_[j] += lp_.objective[static_cast<std::size_t>(j)];
    LpSolution out;
    const auto st = dual_iterate(out.iterations);
    if (!st) return std::nullopt;
    if (*st != LpStatus::Optimal) {
      out.status = *st;
      return out;
    }
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = lp_.objective[static_cast<std::size_t>(j)];
    return finish(out);
  }

 private:
  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * m_ + c; }

  void set_basic(int row, int col, double value) {
    basis_[static_cast<std::size_t>(row)] = col;
    row_of_[col] = row;
    x_[col] = value;
    at_upper_[col] = 0;
  }

  // Diagonal entry of a slack/artificial column in its own row.
  double column_entry_diag(int col, int row) const {
    if (col >= n_ + m_) return art_sign_[static_cast<std::size_t>(row)];
    return 1.0;
  }

  template <typename Fn>
  void for_column(int col, const Fn& fn) const {
    if (col < n_) {
      for (auto [r, a] : lp_.columns[static_cast<std::size_t>(col)]) fn(r, a);
    } else if (col < n_ + m_) {
      fn(col - n_, 1.0);
    } else {
      const int r = col - n_ - m_;
      fn(r, art_sign_[static_cast<std::size_t>(r)]);
    }
  }

  void ftran(int col, std::vector<double>& w) const {
    w.assign(static_cast<std::size_t>(m_), 0.0);
    for_column(col, [&](int r, double a) {
      for (int i = 0; i < m_; ++i) w[static_cast<std::size_t>(i)] += binv_[idx(i, r)] * a;
    });
  }

  LpSolution finish(LpSolution& out) {
    if (const auto st = iterate(out.iterations); st != LpStatus::Optimal) {
      out.status = st;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.values.assign(x_.begin(), x_.begin() + n_);
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) out.objective += lp_.objective[static_cast<std::size_t>(j)] * x_[j];
    out.basis.basic = basis_;
    out.basis.at_upper = at_upper_;
    out.basis.artificial_sign = art_sign_;
    return out;
  }

  // y = c_B B^{-1}, summing only rows of basic columns with a cost.
  void prices(std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
      const double c = cost_[basis_[static_cast<std::size_t>(i)]];
      if (c == 0.0) continue;
      const double* row = &binv_[idx(i, 0)];
      for (int r = 0; r < m_; ++r) y[static_cast<std::size_t>(r)] += c * row[r];
    }
  }

  // Unit columns (slacks, artificials) in the basis cover one row each; only
  // the block of structural columns on the remaining rows needs a dense
  // inverse:  B = [D S1; 0 S2]  =>  B^{-1} = [D^{-1}  -D^{-1} S1 S2^{-1}; 0  S2^{-1}].
  void refactor() {
    std::vector<int> unit_pos(static_cast<std::size_t>(m_), -1);
    std::vector<int> structural;
    for (int i = 0; i < m_; ++i) {
      const int col = basis_[static_cast<std::size_t>(i)];
      if (col < n_) {
        structural.push_back(i);
        continue;
      }
      const int r = col < n_ + m_ ? col - n_ : col - n_ - m_;
      if (unit_pos[static_cast<std::size_t>(r)] >= 0) throw std::runtime_error("simplex: singular basis");
      unit_pos[static_cast<std::size_t>(r)] = i;
    }
    std::vector<int> rest_rows;
    std::vector<int> rest_index(static_cast<std::size_t>(m_), -1);
    for (int r = 0; r < m_; ++r) {
      if (unit_pos[static_cast<std::size_t>(r)] < 0) {
        rest_index[static_cast<std::size_t>(r)] = static_cast<int>(rest_rows.size());
        rest_rows.push_back(r);
      }
    }
    const int s = static_cast<int>(structural.size());
    if (static_cast<int>(rest_rows.size()) != s) throw std::runtime_error("simplex: singular basis");
    const auto sidx = [s](int r, int c) { return static_cast<std::size_t>(r) * s + c; };

    // Gauss-Jordan on [S2 | I] with partial pivoting; inv ends up as S2^{-1}.
    std::vector<double> b(static_cast<std::size_t>(s) * s, 0.0), inv(static_cast<std::size_t>(s) * s, 0.0);
    for (int a = 0; a < s; ++a) {
      for_column(basis_[static_cast<std::size_t>(structural[static_cast<std::size_t>(a)])], [&](int r, double v) {
        const int k = rest_index[static_cast<std::size_t>(r)];
        if (k >= 0) b[sidx(k, a)] = v;
      });
      inv[sidx(a, a)] = 1.0;
    }
    for (int c = 0; c < s; ++c) {
      int best = -1;
      double best_abs = 0.0;
      for (int r = c; r < s; ++r) {
        const double v = std::abs(b[sidx(r, c)]);
        if (v > best_abs) {
          best_abs = v;
          best = r;
        }
      }
      if (best < 0 || best_abs < 1e-12) throw std::runtime_error("simplex: singular basis");
      if (best != c) {
        for (int k = 0; k < s; ++k) {
          std::swap(b[sidx(best, k)], b[sidx(c, k)]);
          std::swap(inv[sidx(best, k)], inv[sidx(c, k)]);
        }
      }
      const double p = b[sidx(c, c)];
      for (int k = 0; k < s; ++k) {
        b[sidx(c, k)] /= p;
        inv[sidx(c, k)] /= p;
      }
      for (int r = 0; r < s; ++r) {
        if (r == c) continue;
        const double f = b[sidx(r, c)];
        if (f == 0.0) continue;
        for (int k = c; k < s; ++k) b[sidx(r, k)] -= f * b[sidx(c, k)];
        for (int k = 0; k < s; ++k) inv[sidx(r, k)] -= f * inv[sidx(c, k)];
      }
    }

    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int a = 0; a < s; ++a) {
      const int pos = structural[static_cast<std::size_t>(a)];
      for (int k = 0; k < s; ++k) binv_[idx(pos, rest_rows[static_cast<std::size_t>(k)])] = inv[sidx(a, k)];
    }
    for (int r = 0; r < m_; ++r) {
      const int pos = unit_pos[static_cast<std::size_t>(r)];
      if (pos >= 0) binv_[idx(pos, r)] = 1.0 / column_entry_diag(basis_[static_cast<std::size_t>(pos)], r);
    }
    for (int a = 0; a < s; ++a) {
      for_column(basis_[static_cast<std::size_t>(structural[static_cast<std::size_t>(a)])], [&](int r, double v) {
        const int pos = unit_pos[static_cast<std::size_t>(r)];
        if (pos < 0) return;
        const double f = v / column_entry_diag(basis_[static_cast<std::size_t>(pos)], r);
        for (int k = 0; k < s; ++k) binv_[idx(pos, rest_rows[static_cast<std::size_t>(k)])] -= f * inv[sidx(a, k)];
      });
    }

    // Recompute basic values from the nonbasic ones.
    std::vector<double> rhs(lp_.rhs);
    const int total = n_ + 2 * m_;
    for (int j = 0; j < total; ++j) {
      if (row_of_[j] >= 0 || x_[j] == 0.0) continue;
      for_column(j, [&](int r, double a) { rhs[static_cast<std::size_t>(r)] -= a * x_[j]; });
    }
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      for (int r = 0; r < m_; ++r) v += binv_[idx(i, r)] * rhs[static_cast<std::size_t>(r)];
      x_[basis_[static_cast<std::size_t>(i)]] = v;
    }
  }

  void pivot(int leave_row, int entering, const std::vector<double>& w, bool leaving_to_lower) {
    const int leaving = basis_[static_cast<std::size_t>(leave_row)];
    x_[leaving] = leaving_to_lower ? lb_[leaving] : ub_[leaving];
    at_upper_[leaving] = leaving_to_lower || lb_[leaving] == ub_[leaving] ? 0 : 1;
    row_of_[leaving] = -1;
    basis_[static_cast<std::size_t>(leave_row)] = entering;
    row_of_[entering] = leave_row;
    at_upper_[entering] = 0;
    const double p = w[static_cast<std::size_t>(leave_row)];
    double* prow = &binv_[idx(leave_row, 0)];
    for (int k = 0; k < m_; ++k) prow[k] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == leave_row) continue;
      const double f = w[static_cast<std::size_t>(i)];
      if (f == 0.0) continue;
      double* row = &binv_[idx(i, 0)];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
  }

  // Dual simplex pivots until the basis is primal feasible. Infeasible when a
  // violated row cannot move; nullopt when it gives up (iteration cap).
  std::optional<LpStatus> dual_iterate(int& iterations) {
    const int total = n_ + 2 * m_;
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> w;
    int since_refactor = 0;
    int degenerate_run = 0;
    const long long limit = 20LL * (total + 10);
    for (long long it = 0; it < limit; ++it) {
      if (tol_.deadline && it % 32 == 0 && std::chrono::steady_clock::now() > *tol_.deadline) {
        return LpStatus::TimedOut;
      }
      if (since_refactor >= kRefactorInterval) {
        refactor();
        since_refactor = 0;
      }
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      int leave_row = -1;
      double worst = tol_.feasibility;
      for (int i = 0; i < m_; ++i) {
        const int col = basis_[static_cast<std::size_t>(i)];
        const double v = std::max(lb_[col] - x_[col], x_[col] - ub_[col]);
        if (v <= tol_.feasibility) continue;
        if (bland ? leave_row < 0 || col < basis_[static_cast<std::size_t>(leave_row)] : v > worst) {
          worst = v;
          leave_row = i;
        }
      }
      if (leave_row < 0) return LpStatus::Optimal;
      const int leaving = basis_[static_cast<std::size_t>(leave_row)];
      const bool below = x_[leaving] < lb_[leaving];
      const double target = below ? lb_[leaving] : ub_[leaving];

      prices(y);
      const double* rho = &binv_[idx(leave_row, 0)];
      int entering = -1;
      double best_ratio = kInf, best_alpha = 0.0;
      for (int j = 0; j < total; ++j) {
        if (row_of_[j] >= 0 || !(ub_[j] > lb_[j])) continue;
        double alpha = 0.0, d = cost_[j];
        for_column(j, [&](int r, double a) {
          alpha += rho[r] * a;
          d -= a * y[static_cast<std::size_t>(r)];
        });
        if (std::abs(alpha) < tol_.pivot) continue;
        const bool up = !at_upper_[j];
        const bool eligible = below ? (up ? alpha < 0 : alpha > 0) : (up ? alpha > 0 : alpha < 0);
        if (!eligible) continue;
        const double ratio = std::abs(d) / std::abs(alpha);
        const bool tie_wins = bland ? j < entering : std::abs(alpha) > std::abs(best_alpha);
        if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && tie_wins)) {
          best_ratio = ratio;
          best_alpha = alpha;
          entering = j;
        }
      }
      if (entering < 0) return LpStatus::Infeasible;
      degenerate_run = best_ratio < 1e-12 ? degenerate_run + 1 : 0;
      ++iterations;
      ftran(entering, w);
      const double delta = (x_[leaving] - target) / w[static_cast<std::size_t>(leave_row)];
      x_[entering] += delta;
      for (int i = 0; i < m_; ++i) x_[basis_[static_cast<std::size_t>(i)]] -= delta * w[static_cast<std::size_t>(i)];
      pivot(leave_row, entering, w, below);
      ++since_refactor;
    }
    return std::nullopt;
  }

  // Runs primal simplex on cost_ to optimality, unboundedness or the deadline.
  LpStatus iterate(int& iterations) {
    const int total = n_ + 2 * m_;
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> w;
    int degenerate_run = 0;
    int since_refactor = 0;
    const long long limit = 200LL * (total + 10) + 100000;
    for (long long it = 0; it < limit; ++it) {
      if (tol_.deadline && it % 32 == 0 && std::chrono::steady_clock::now() > *tol_.deadline) {
        return LpStatus::TimedOut;
      }
      if (since_refactor >= kRefactorInterval) {
        refactor();
        since_refactor = 0;
      }
      prices(y);
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      int entering = -1;
      double entering_dir = 0.0;
      double best_score = 0.0;
      for (int j = 0; j < total; ++j) {
        if (row_of_[j] >= 0 || !(ub_[j] > lb_[j])) continue;
        double d = cost_[j];
        for_column(j, [&](int r, double a) { d -= a * y[static_cast<std::size_t>(r)]; });
        double dir = 0.0;
        if (!at_upper_[j] && d > tol_.optimality && ub_[j] > x_[j]) dir = 1.0;
        if (at_upper_[j] && d < -tol_.optimality) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          entering_dir = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = j;
          entering_dir = dir;
        }
      }
      if (entering < 0) return LpStatus::Optimal;
      ++iterations;

      ftran(entering, w);
      double theta = ub_[entering] - lb_[entering];
      int leave_row = -1;
      double leave_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double alpha = entering_dir * w[static_cast<std::size_t>(i)];
        const int col = basis_[static_cast<std::size_t>(i)];
        double t = kInf;
        if (alpha > tol_.pivot && lb_[col] > -kInf) {
          t = (x_[col] - lb_[col]) / alpha;
        } else if (alpha < -tol_.pivot && ub_[col] < kInf) {
          t = (ub_[col] - x_[col]) / -alpha;
        } else {
          continue;
        }
        if (t < 0.0) t = 0.0;
        bool take = false;
        if (t < theta - 1e-12) {
          take = true;
        } else if (t <= theta + 1e-12) {
          take = leave_row < 0 ||
                 (bland ? col < basis_[static_cast<std::size_t>(leave_row)] : std::abs(alpha) > std::abs(leave_alpha));
        }
        if (take) {
          theta = t;
          leave_row = i;
          leave_alpha = alpha;
        }
      }
      if (theta == kInf) return LpStatus::Unbounded;

      degenerate_run = theta < 1e-12 ? degenerate_run + 1 : 0;
      x_[entering] += entering_dir * theta;
      for (int i = 0; i < m_; ++i) {
        x_[basis_[static_cast<std::size_t>(i)]] -= theta * entering_dir * w[static_cast<std::size_t>(i)];
      }
      if (leave_row < 0) {
        // Bound flip.
        at_upper_[entering] = entering_dir > 0 ? 1 : 0;
        x_[entering] = entering_dir > 0 ? ub_[entering] : lb_[entering];
        continue;
      }
      pivot(leave_row, entering, w, leave_alpha > 0);
      ++since_refactor;
    }
    throw std::runtime_error("simplex: iteration limit reached");
  }

  const LpProblem& lp_;
  SimplexTolerances tol_;
  int m_;
  int n_;
  std::vector<double> lb_, ub_, x_, cost_, binv_, art_sign_;
  std::vector<char> at_upper_;
  std::vector<int> row_of_;
  std::vector<int> basis_;
};

}  // namespace

LpProblem LpProblem::from_model(const IpModel& model) {
  LpProblem lp;
  lp.num_rows = model.num_constraints();
  lp.columns.resize(static_cast<std::size_t>(model.num_variables()));
  int row = 0;
  for (const LinearConstraint& c : model.constraints()) {
    for (const Term& t : c.terms) lp.columns[static_cast<std::size_t>(t.var.index)].emplace_back(row, t.coef);
    lp.relations.push_back(c.relation);
    lp.rhs.push_back(c.rhs);
    ++row;
  }
  lp.objective.assign(model.objective().begin(), model.objective().end());
  return lp;
}

LpBasis extend_basis(const LpBasis& basis, int num_cols, int num_rows) {
  const int old_rows = static_cast<int>(basis.basic.size());
  if (basis.empty() || old_rows == num_rows) return basis;
  const int shift = num_rows - old_rows;
  const int old_art = num_cols + old_rows;
  LpBasis out;
  out.basic.reserve(static_cast<std::size_t>(num_rows));
  for (int col : basis.basic) out.basic.push_back(col >= old_art ? col + shift : col);
  for (int r = old_rows; r < num_rows; ++r) out.basic.push_back(num_cols + r);
  out.at_upper.assign(static_cast<std::size_t>(num_cols + 2 * num_rows), 0);
  for (int j = 0; j < static_cast<int>(basis.at_upper.size()); ++j) {
    out.at_upper[static_cast<std::size_t>(j >= old_art ? j + shift : j)] = basis.at_upper[static_cast<std::size_t>(j)];
  }
  out.artificial_sign = basis.artificial_sign;
  out.artificial_sign.resize(static_cast<std::size_t>(num_rows), 1.0);
  return out;
}

LpSolution solve_lp(const LpProblem& lp, std::span<const double> lower, std::span<const double> upper,
                    const SimplexTolerances& tol, const LpBasis* warm) {
  if (lower.size() != static_cast<std::size_t>(lp.num_cols()) || upper.size() != lower.size()) {
    throw std::invalid_argument("solve_lp: one bound per column expected");
  }
  if (warm && !warm->empty()) {
    BoundedSimplex simplex(lp, lower, upper, tol);
    if (auto out = simplex.run_warm(*warm)) return std::move(*out);
  }
  BoundedSimplex simplex(lp, lower, upper, tol);
  return simplex.run();
}

}  // namespace kep
