#include "kep/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "kep/lp_format.hpp"
#include "kep/simplex.hpp"
#include "text_util.hpp"

namespace kep {
namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr std::size_t kRowsPerRound = 32;

struct SearchNode {
  double bound;
  std::uint64_t sequence;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> lp_values;
  LpBasis basis;  // warm start for the children

  bool operator<(const SearchNode& other) const {
    // priority_queue pops the largest: best bound first, older node on ties.
    if (bound != other.bound) return bound < other.bound;
    return sequence > other.sequence;
  }
};

bool integral_objective(const IpModel& model) {
  for (double c : model.objective()) {
    if (c != std::floor(c)) return false;
  }
  return true;
}

std::vector<std::uint8_t> round_values(std::span<const double> x, bool down) {
  std::vector<std::uint8_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = down ? (x[i] >= 1.0 - kIntegralityTol) : (x[i] >= 0.5);
  }
  return out;
}

}  // namespace

SolveResult solve(const IpModel& model, const SolveOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const int n = model.num_variables();
  const auto constraints = model.constraints();
  const int m = static_cast<int>(constraints.size());
  // Packing rows already met at the origin are added only once an LP point
  // violates them, which keeps the basis small for the path-heavy models.
  std::vector<char> in_lp(static_cast<std::size_t>(m), 1);
  if (m > 2 * n) {
    for (int r = 0; r < m; ++r) {
      const LinearConstraint& c = constraints[static_cast<std::size_t>(r)];
      if (c.relation != Relation::LessEqual || c.rhs < 0.0) continue;
      if (std::all_of(c.terms.begin(), c.terms.end(), [](const Term& t) { return t.coef >= 0.0; })) {
        in_lp[static_cast<std::size_t>(r)] = 0;
      }
    }
  }
  LpProblem lp;
  lp.columns.resize(static_cast<std::size_t>(n));
  lp.objective.assign(model.objective().begin(), model.objective().end());
  auto add_row = [&](int r) {
    const LinearConstraint& c = constraints[static_cast<std::size_t>(r)];
    for (const Term& t : c.terms) lp.columns[static_cast<std::size_t>(t.var.index)].emplace_back(lp.num_rows, t.coef);
    lp.relations.push_back(c.relation);
    lp.rhs.push_back(c.rhs);
    ++lp.num_rows;
    in_lp[static_cast<std::size_t>(r)] = 1;
  };
  std::vector<int> deferred;
  for (int r = 0; r < m; ++r) {
    if (in_lp[static_cast<std::size_t>(r)]) {
      add_row(r);
    } else {
      deferred.push_back(r);
    }
  }
  // Adds the most violated deferred rows at x; false when none is violated.
  auto add_violated = [&](std::span<const double> x) {
    std::vector<std::pair<double, int>> violated;
    for (int r : deferred) {
      if (in_lp[static_cast<std::size_t>(r)]) continue;
      const LinearConstraint& c = constraints[static_cast<std::size_t>(r)];
      double activity = 0.0;
      for (const Term& t : c.terms) activity += t.coef * x[static_cast<std::size_t>(t.var.index)];
      if (activity > c.rhs + 1e-7) violated.emplace_back(c.rhs - activity, r);
    }
    if (violated.empty()) return false;
    const auto take = std::min(violated.size(), kRowsPerRound);
    std::partial_sort(violated.begin(), violated.begin() + static_cast<std::ptrdiff_t>(take), violated.end());
    for (std::size_t i = 0; i < take; ++i) add_row(violated[i].second);
    std::erase_if(deferred, [&](int r) { return in_lp[static_cast<std::size_t>(r)] != 0; });
    return true;
  };
  const bool integral = integral_objective(model);

  SolveResult result;
  result.assignment.values.assign(static_cast<std::size_t>(n), 0);
  bool have_incumbent = model.is_feasible(result.assignment.values);
  double incumbent = have_incumbent ? 0.0 : -std::numeric_limits<double>::infinity();
  if (have_incumbent) result.incumbent_history.push_back(0.0);

  auto consider = [&](std::vector<std::uint8_t> values) {
    if (!model.is_feasible(values)) return;
    const double obj = model.evaluate(values);
    if (!have_incumbent || obj > incumbent + 1e-9) {
      have_incumbent = true;
      incumbent = obj;
      result.assignment.values = std::move(values);
      result.assignment.objective = obj;
      result.incumbent_history.push_back(obj);
    }
  };
  auto prunable = [&](double bound) {
    if (!have_incumbent) return false;
    if (integral) return std::floor(bound + kIntegralityTol) <= incumbent + 0.5;
    return bound <= incumbent + 1e-9;
  };

  SimplexTolerances tolerances;
  if (options.time_limit) {
    tolerances.deadline = start + std::chrono::duration_cast<clock::duration>(*options.time_limit);
  }
  std::uint64_t sequence = 0;
  std::priority_queue<SearchNode> open;
  // Solves the relaxation for the given bounds and either records an integral
  // solution or queues the node.
  auto evaluate = [&](std::vector<double> lower, std::vector<double> upper, bool root, const LpBasis* warm) {
    LpBasis start;
    if (warm) start = extend_basis(*warm, n, lp.num_rows);
    LpSolution sol;
    while (true) {
      sol = solve_lp(lp, lower, upper, tolerances, start.empty() ? nullptr : &start);
      if (sol.status != LpStatus::Optimal || !add_violated(sol.values)) break;
      start = extend_basis(sol.basis, n, lp.num_rows);
    }
    ++result.nodes;
    if (sol.status == LpStatus::Unbounded) throw InvariantError("LP relaxation of a binary program is unbounded");
    if (sol.status == LpStatus::TimedOut) {
      result.timed_out = true;
      if (root) result.root_bound = std::numeric_limits<double>::infinity();
      return;
    }
    if (sol.status != LpStatus::Optimal) {
      if (root) result.root_bound = -std::numeric_limits<double>::infinity();
      return;
    }
    if (root) result.root_bound = sol.objective;
    if (prunable(sol.objective)) return;
    bool fractional = false;
    for (double v : sol.values) {
      if (v > kIntegralityTol && v < 1.0 - kIntegralityTol) {
        fractional = true;
        break;
      }
    }
    if (!fractional) {
      auto rounded = round_values(sol.values, false);
      if (model.is_feasible(rounded)) {
        consider(std::move(rounded));
        return;
      }
    } else {
      consider(round_values(sol.values, true));
      if (prunable(sol.objective)) return;
    }
    open.push(SearchNode{sol.objective, sequence++, std::move(lower), std::move(upper), std::move(sol.values),
                         std::move(sol.basis)});
  };

  evaluate(std::vector<double>(static_cast<std::size_t>(n), 0.0), std::vector<double>(static_cast<std::size_t>(n), 1.0),
           true, nullptr);

  while (!open.empty() && !result.timed_out) {
    if (options.time_limit && clock::now() - start > *options.time_limit) {
      result.timed_out = true;
      break;
    }
    SearchNode node = open.top();
    open.pop();
    if (prunable(node.bound)) continue;
    int branch = -1;
    double best_distance = 2.0;
    for (int j = 0; j < n; ++j) {
      const double v = node.lp_values[static_cast<std::size_t>(j)];
      if (node.lower[static_cast<std::size_t>(j)] == node.upper[static_cast<std::size_t>(j)]) continue;
      const double distance = std::abs(v - 0.5);
      if (distance < best_distance - 1e-12) {
        best_distance = distance;
        branch = j;
      }
    }
    // Near-integral LP points that fail the exact check still get split on
    // their free variables; a node with none left is a dead end.
    if (branch < 0) continue;
    ++result.branches;
    for (double value : {1.0, 0.0}) {
      std::vector<double> lower = node.lower;
      std::vector<double> upper = node.upper;
      lower[static_cast<std::size_t>(branch)] = value;
      upper[static_cast<std::size_t>(branch)] = value;
      evaluate(std::move(lower), std::move(upper), false, &node.basis);
    }
  }
  result.optimal = have_incumbent && !result.timed_out;
  if (have_incumbent) result.assignment.objective = model.evaluate(result.assignment.values);
  return result;
}

std::optional<Assignment> solve_exhaustive(const IpModel& model) {
  const int n = model.num_variables();
  if (n > kExhaustiveMaxVariables) {
    throw std::invalid_argument("solve_exhaustive: " + std::to_string(n) + " variables exceed the limit of " +
                                std::to_string(kExhaustiveMaxVariables));
  }
  const auto constraints = model.constraints();
  const std::size_t m = constraints.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> columns(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < m; ++r) {
    for (const Term& t : constraints[r].terms) columns[static_cast<std::size_t>(t.var.index)].emplace_back(r, t.coef);
  }
  auto satisfied = [&](std::size_t r, double activity) {
    const double rhs = constraints[r].rhs;
    switch (constraints[r].relation) {
      case Relation::LessEqual: return activity <= rhs + 1e-9;
      case Relation::GreaterEqual: return activity >= rhs - 1e-9;
      case Relation::Equal: return std::abs(activity - rhs) <= 1e-9;
    }
    return false;
  };
  std::vector<double> activity(m, 0.0);
  std::size_t violated = 0;
  for (std::size_t r = 0; r < m; ++r) violated += !satisfied(r, 0.0);

  // Bit (n-1-i) holds variable i, so numeric order is lexicographic order.
  std::uint32_t mask = 0;
  double objective = 0.0;
  std::optional<std::uint32_t> best_mask;
  double best = 0.0;
  auto record = [&] {
    if (violated != 0) return;
    if (!best_mask || objective > best + 1e-9 || (objective >= best - 1e-9 && mask < *best_mask)) {
      best_mask = mask;
      best = objective;
    }
  };
  record();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int var = std::countr_zero(k);
    const std::uint32_t bit = std::uint32_t{1} << (n - 1 - var);
    const double sign = (mask & bit) ? -1.0 : 1.0;
    mask ^= bit;
    objective += sign * model.objective()[static_cast<std::size_t>(var)];
    for (auto [r, coef] : columns[static_cast<std::size_t>(var)]) {
      const bool before = satisfied(r, activity[r]);
      activity[r] += sign * coef;
      const bool after = satisfied(r, activity[r]);
      if (before && !after) ++violated;
      if (!before && after) --violated;
    }
    record();
  }
  if (!best_mask) return std::nullopt;
  Assignment a;
  a.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a.values[static_cast<std::size_t>(i)] = (*best_mask >> (n - 1 - i)) & 1U;
  a.objective = model.evaluate(a.values);
  return a;
}

Assignment solve_external(const IpModel& model, const std::string& command, const std::string& work_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(work_dir);
  const fs::path lp_path = dir / "model.lp";
  const fs::path sol_path = dir / "model.sol";
  {
    std::ofstream out(lp_path);
    if (!out) throw std::runtime_error("cannot write " + lp_path.string());
    write_lp(out, model);
  }
  std::string cmd = command;
  auto replace = [&](const std::string& key, const std::string& value) {
    for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size())) {
      cmd.replace(pos, key.size(), value);
    }
  };
  replace("{lp}", lp_path.string());
  replace("{sol}", sol_path.string());
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("external solver failed: " + cmd);

  std::ifstream in(sol_path);
  if (!in) throw std::runtime_error("external solver wrote no solution file " + sol_path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < model.num_variables(); ++i) index.emplace(model.variable_name(VarId{i}), i);
  Assignment a;
  a.values.assign(static_cast<std::size_t>(model.num_variables()), 0);
  detail::for_each_line(buffer.str(), [&](int line_no, std::string_view line) {
    line = detail::trim(detail::strip_comment(line));
    if (line.empty()) return;
    const auto fields = detail::split_ws(line);
    if (fields.size() != 2) throw ParseError(line_no, "expected '<variable> <value>'");
    const auto it = index.find(std::string(fields[0]));
    if (it == index.end()) throw ParseError(line_no, "unknown variable " + std::string(fields[0]));
    const auto value = detail::parse_double(fields[1]);
    if (!value) throw ParseError(line_no, "bad value " + std::string(fields[1]));
    a.values[static_cast<std::size_t>(it->second)] = std::lround(*value) != 0;
  });
  a.objective = model.evaluate(a.values);
  return a;
}

}  // namespace kep
