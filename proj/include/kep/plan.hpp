#pragma once

#include <span>
#include <string>
#include <vector>

#include "kep/enumeration.hpp"
#include "kep/graph.hpp"
#include "kep/ip_model.hpp"
#include "kep/solver.hpp"

namespace kep {

/// An altruist followed by the recipients its chain reaches, in order.
struct Chain {
  std::vector<NodeId> nodes;
  int transplants() const { return static_cast<int>(nodes.size()) - 1; }
  friend bool operator==(const Chain&, const Chain&) = default;
};

struct ExchangePlan {
  std::vector<Cycle> cycles;  // sorted by first node
  std::vector<Chain> chains;  // sorted by altruist
  // Transplants by recipient country, index k-1.
  std::vector<int> per_country;

  int transplants(CountryId k) const { return per_country.at(static_cast<std::size_t>(k - 1)); }
  int total_transplants() const;
  /// Every node taking part, ascending.
  std::vector<NodeId> covered_nodes() const;
};

/// Turns a feasible assignment back into exchanges: selected cycle variables
/// directly, arc variables (plus arcs of selected segments) by following
/// successors. Cycles through an artificial patient become chains. Throws
/// InvariantError when the selected arcs do not split into node-disjoint
/// cycles.
ExchangePlan decode(const IpModel& model, const Assignment& assignment, const CompatibilityGraph& g);

/// Builds a plan from cycles of `g`, recomputing chains and counts.
ExchangePlan make_plan(const CompatibilityGraph& g, std::vector<Cycle> cycles);

/// Re-expresses a plan computed on an induced subgraph in parent ids.
ExchangePlan lift_plan(const ExchangePlan& plan, std::span<const NodeId> origin, const CompatibilityGraph& parent);

/// Union of node-disjoint plans on the same graph. Throws InvariantError on overlap.
ExchangePlan merge_plans(const CompatibilityGraph& g, std::span<const ExchangePlan> plans);

/// Empty when the plan is node-disjoint, uses only existing arcs and every
/// cycle passes `policy`; otherwise a description of the first problem.
/// Chains are checked on the chain-reduced graph.
std::string validate_plan(const ExchangePlan& plan, const CompatibilityGraph& g, const PolicyConfig& policy);

std::string format_plan(const ExchangePlan& plan);

}  // namespace kep
