#include "kep/policies.hpp"

#include <algorithm>

#include "kep/enumeration.hpp"
#include "kep/formulations.hpp"
#include "kep/instance.hpp"

namespace kep {
namespace {

bool has_altruists(const CompatibilityGraph& g) {
  return std::any_of(g.nodes().begin(), g.nodes().end(),
                     [](const Node& n) { return n.kind == NodeKind::AltruisticDonor; });
}

PolicyOutcome outcome_from(Regime regime, ExchangePlan plan, bool timed_out) {
  PolicyOutcome out;
  out.regime = regime;
  out.per_country = plan.per_country;
  out.plan = std::move(plan);
  out.timed_out = timed_out;
  return out;
}

// Optimal plan of one country on its own pairs, in parent ids.
ExchangePlan national_plan(const CompatibilityGraph& g, const PolicyConfig& policy, CountryId k,
                           const RegimeOptions& options, bool& timed_out) {
  const Subgraph sub = country_subgraph(g, k);
  if (sub.graph.num_nodes() == 0) return make_plan(g, {});
  IpModel model;
  if (policy.country(k).national_cycle_cap.finite()) {
    model = build_cycle_model(enumerate_national_cycles(sub.graph, policy, k), sub.graph.num_nodes());
  } else {
    model = build_circulation_model(sub.graph);
  }
  const SolveResult r = solve(model, options.solve);
  timed_out = timed_out || r.timed_out;
  return lift_plan(decode(model, r.assignment, sub.graph), sub.origin, g);
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::NoCooperation: return "local";
    case Regime::Consecutive: return "seq";
    case Regime::Merged: return "merged";
  }
  return "?";
}

std::optional<Regime> parse_regime(std::string_view text) {
  for (Regime r : kAllRegimes) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::string_view to_string(ModelChoice m) {
  switch (m) {
    case ModelChoice::Auto: return "auto";
    case ModelChoice::Cycle: return "cycle";
    case ModelChoice::Edge: return "edge";
    case ModelChoice::Mixed: return "mixed";
    case ModelChoice::BoundedUnbounded: return "atcz";
  }
  return "?";
}

std::optional<ModelChoice> parse_model_choice(std::string_view text) {
  for (ModelChoice m : {ModelChoice::Auto, ModelChoice::Cycle, ModelChoice::Edge, ModelChoice::Mixed,
                        ModelChoice::BoundedUnbounded}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

int PolicyOutcome::total() const {
  int sum = 0;
  for (int v : per_country) sum += v;
  return sum;
}

IpModel build_pool_model(const CompatibilityGraph& g, const PolicyConfig& policy, ModelChoice choice) {
  policy.validate();
  if (policy.num_countries() < g.num_countries()) throw ConfigError("policy covers fewer countries than the graph");
  int unbounded = 0;
  for (const CountryPolicy& c : policy.countries) unbounded += !c.national_cycle_cap.finite();
  if (choice == ModelChoice::Auto) {
    if (unbounded == 0 && policy.international_cycle_cap.finite()) {
      choice = ModelChoice::Cycle;
    } else if (unbounded == 1 && policy.num_countries() == 2) {
      choice = ModelChoice::BoundedUnbounded;
    } else {
      throw ConfigError("no model handles this policy: at most one of two countries may have unbounded cycles");
    }
  }
  const bool chains = policy.chains_enabled && std::any_of(g.nodes().begin(), g.nodes().end(), [](const Node& n) {
    return n.kind == NodeKind::ArtificialPatient;
  });
  switch (choice) {
    case ModelChoice::Cycle:
      return build_cycle_model(enumerate_cycles(g, policy), g.num_nodes());
    case ModelChoice::Edge:
      if (!policy.has_uniform_caps() || policy.chains_enabled) {
        throw ConfigError("the edge model only expresses one cycle cap for every country; use cycle, mixed or atcz");
      }
      return build_edge_model(g, policy.international_cycle_cap);
    case ModelChoice::Mixed:
      if (chains) throw ConfigError("altruistic chains need the cycle model");
      if (unbounded > 0) throw ConfigError("the mixed model needs finite national cycle caps; use atcz");
      return build_mixed_model(g, policy);
    case ModelChoice::BoundedUnbounded:
      if (chains) throw ConfigError("altruistic chains need the cycle model");
      return build_bounded_unbounded_model(g, policy);
    case ModelChoice::Auto: break;
  }
  throw ConfigError("unknown model choice");
}

PolicyOutcome solve_pool(const CompatibilityGraph& g, const PolicyConfig& policy, const RegimeOptions& options) {
  const CompatibilityGraph reduced = policy.chains_enabled && has_altruists(g) ? reduce_chains_to_cycles(g) : g;
  const IpModel model = build_pool_model(reduced, policy, options.model);
  const SolveResult r = solve(model, options.solve);
  ExchangePlan plan = decode(model, r.assignment, reduced);
  return outcome_from(Regime::Merged, std::move(plan), r.timed_out);
}

PolicyOutcome run_no_cooperation(const CompatibilityGraph& g, const PolicyConfig& policy,
                                 const RegimeOptions& options) {
  const CompatibilityGraph reduced = policy.chains_enabled && has_altruists(g) ? reduce_chains_to_cycles(g) : g;
  bool timed_out = false;
  std::vector<ExchangePlan> parts;
  for (CountryId k = 1; k <= reduced.num_countries(); ++k) {
    parts.push_back(national_plan(reduced, policy, k, options, timed_out));
  }
  return outcome_from(Regime::NoCooperation, merge_plans(reduced, parts), timed_out);
}

PolicyOutcome run_consecutive(const CompatibilityGraph& g, const PolicyConfig& policy, const RegimeOptions& options) {
  const CompatibilityGraph reduced = policy.chains_enabled && has_altruists(g) ? reduce_chains_to_cycles(g) : g;
  PolicyOutcome national = run_no_cooperation(reduced, policy, options);
  std::vector<char> matched(static_cast<std::size_t>(reduced.num_nodes()), 0);
  for (NodeId v : national.plan.covered_nodes()) matched[static_cast<std::size_t>(v)] = 1;
  std::vector<NodeId> rest;
  for (NodeId v = 0; v < reduced.num_nodes(); ++v) {
    if (!matched[static_cast<std::size_t>(v)]) rest.push_back(v);
  }
  const Subgraph sub = induced_subgraph(reduced, rest);
  PolicyOutcome international = solve_pool(sub.graph, policy, options);
  const std::vector<ExchangePlan> parts{national.plan, lift_plan(international.plan, sub.origin, reduced)};
  return outcome_from(Regime::Consecutive, merge_plans(reduced, parts), national.timed_out || international.timed_out);
}

PolicyOutcome run_merged(const CompatibilityGraph& g, const PolicyConfig& policy, const RegimeOptions& options) {
  return solve_pool(g, policy, options);
}

PolicyOutcome run_regime(Regime r, const CompatibilityGraph& g, const PolicyConfig& policy,
                         const RegimeOptions& options) {
  switch (r) {
    case Regime::NoCooperation: return run_no_cooperation(g, policy, options);
    case Regime::Consecutive: return run_consecutive(g, policy, options);
    case Regime::Merged: return run_merged(g, policy, options);
  }
  throw ConfigError("unknown regime");
}

std::vector<Benefit> benefit_metrics(std::span<const std::vector<double>> totals) {
  if (totals.size() != std::size(kAllRegimes)) throw std::invalid_argument("benefit_metrics needs one row per regime");
  const auto& local = totals[0];
  std::vector<Benefit> out(local.size());
  for (std::size_t k = 0; k < local.size(); ++k) {
    if (local[k] == 0.0) continue;
    out[k].seq_over_local = totals[1].at(k) / local[k];
    out[k].merged_over_local = totals[2].at(k) / local[k];
  }
  return out;
}

std::optional<double> mean_defined(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  int count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

}  // namespace kep
