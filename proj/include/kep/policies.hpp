#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kep/graph.hpp"
#include "kep/plan.hpp"
#include "kep/policy.hpp"
#include "kep/solver.hpp"

namespace kep {

enum class Regime { NoCooperation, Consecutive, Merged };

/// "local", "seq", "merged".
std::string_view to_string(Regime r);
std::optional<Regime> parse_regime(std::string_view text);
inline constexpr Regime kAllRegimes[] = {Regime::NoCooperation, Regime::Consecutive, Regime::Merged};

enum class ModelChoice { Auto, Cycle, Edge, Mixed, BoundedUnbounded };
std::string_view to_string(ModelChoice m);
/// "auto", "cycle", "edge", "mixed", "atcz".
std::optional<ModelChoice> parse_model_choice(std::string_view text);

struct RegimeOptions {
  ModelChoice model = ModelChoice::Auto;
  SolveOptions solve;
};

struct PolicyOutcome {
  Regime regime = Regime::NoCooperation;
  ExchangePlan plan;
  std::vector<int> per_country;  // transplants by recipient country, index k-1
  bool timed_out = false;

  int total() const;
};

/// Model used for a pool-wide solve under `policy`. Auto picks the cycle
/// model when every cap is finite and the bounded/unbounded model for two
/// countries with exactly one unbounded. Throws ConfigError when the choice
/// cannot express the policy.
IpModel build_pool_model(const CompatibilityGraph& g, const PolicyConfig& policy, ModelChoice choice);

/// One optimisation over the whole graph; the building block of every regime.
PolicyOutcome solve_pool(const CompatibilityGraph& g, const PolicyConfig& policy, const RegimeOptions& options = {});

/// Each country matches only its own pairs under its national cycle cap.
PolicyOutcome run_no_cooperation(const CompatibilityGraph& g, const PolicyConfig& policy,
                                 const RegimeOptions& options = {});
/// National runs first, then one pool-wide run on the pairs left over.
PolicyOutcome run_consecutive(const CompatibilityGraph& g, const PolicyConfig& policy,
                              const RegimeOptions& options = {});
/// A single pool-wide run.
PolicyOutcome run_merged(const CompatibilityGraph& g, const PolicyConfig& policy, const RegimeOptions& options = {});

PolicyOutcome run_regime(Regime r, const CompatibilityGraph& g, const PolicyConfig& policy,
                         const RegimeOptions& options = {});

/// Per-country ratios against the no-cooperation count; undefined when that
/// count is zero.
struct Benefit {
  std::optional<double> merged_over_local;
  std::optional<double> seq_over_local;
};

/// `totals[r][k-1]` is country k's transplant count under regime r (indexed
/// like kAllRegimes).
std::vector<Benefit> benefit_metrics(std::span<const std::vector<double>> totals);

/// Mean of the defined values; nullopt when none is defined.
std::optional<double> mean_defined(std::span<const std::optional<double>> values);

}  // namespace kep
