#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kep/ip_model.hpp"

namespace kep {

struct Assignment {
  std::vector<std::uint8_t> values;  // one 0/1 entry per model variable
  double objective = 0.0;

  bool operator[](VarId v) const { return values.at(static_cast<std::size_t>(v.index)) != 0; }
};

struct SolveOptions {
  // Wall-clock budget; unset means no limit.
  std::optional<std::chrono::duration<double>> time_limit;
};

struct SolveResult {
  Assignment assignment;
  bool timed_out = false;
  bool optimal = false;
  // LP relaxation value at the root; an upper bound on every feasible objective.
  double root_bound = 0.0;
  std::size_t nodes = 0;     // LP relaxations solved
  std::size_t branches = 0;  // nodes split on a fractional variable
  // Incumbent objective after each improvement, in order.
  std::vector<double> incumbent_history;
};

/// Best-first branch-and-bound on the LP relaxation. Branches on the
/// fractional variable closest to 0.5 (lowest index on ties). An infeasible
/// model yields the all-zero assignment with `optimal` false.
SolveResult solve(const IpModel& model, const SolveOptions& options = {});

inline constexpr int kExhaustiveMaxVariables = 25;

/// Tries all 2^n assignments (n <= kExhaustiveMaxVariables, otherwise
/// std::invalid_argument). Ties go to the lexicographically smallest
/// assignment. Returns nullopt when nothing is feasible.
std::optional<Assignment> solve_exhaustive(const IpModel& model);

/// Writes the model as LP text, runs `command` with the placeholders {lp} and
/// {sol} replaced by file paths, and reads `<name> <value>` lines back.
/// Unlisted variables are 0. Throws std::runtime_error on command failure
/// and ParseError on a malformed solution file.
Assignment solve_external(const IpModel& model, const std::string& command, const std::string& work_dir);

}  // namespace kep
