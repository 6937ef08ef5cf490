#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kep/graph.hpp"
#include "kep/policy.hpp"

namespace kep {

/// A directed cycle, rotated so its smallest node id comes first.
struct Cycle {
  std::vector<NodeId> nodes;
  std::vector<CountryId> countries;  // parallel to nodes
  bool international = false;
  // Passes through an artificial patient, i.e. encodes an altruistic chain.
  bool chain = false;
  int artificial_nodes = 0;
  double weight = 0.0;  // sum of arc weights

  std::size_t size() const { return nodes.size(); }
  friend bool operator==(const Cycle& a, const Cycle& b) { return a.nodes == b.nodes; }
};

/// A national path inside an international cycle; one node is a valid segment.
struct Segment {
  std::vector<NodeId> nodes;
  CountryId country = 1;
  double weight = 0.0;  // sum of the segment's own arc weights

  int arc_count() const { return static_cast<int>(nodes.size()) - 1; }
  NodeId head() const { return nodes.front(); }
  NodeId tail() const { return nodes.back(); }
  friend bool operator==(const Segment& a, const Segment& b) { return a.nodes == b.nodes; }
};

/// Builds a canonical cycle from any rotation of its node list. Throws
/// InvariantError when an arc is missing or a node repeats.
Cycle make_cycle(const CompatibilityGraph& g, std::span<const NodeId> nodes);
Segment make_segment(const CompatibilityGraph& g, std::span<const NodeId> nodes);

bool is_local(std::span<const CountryId> countries);
inline bool is_local(const Cycle& c) { return is_local(c.countries); }

/// Pairs per country <= beta^k and distinct countries <= gamma.
bool check_countries(std::span<const CountryId> countries, const PolicyConfig& policy);
inline bool check_countries(const Cycle& c, const PolicyConfig& policy) {
  return check_countries(c.countries, policy);
}

/// Splits the cyclic country sequence into maximal same-country runs
/// (the run through position 0 may wrap) and checks node count <= L^k and
/// runs per country <= lambda^k. Meant for international cycles.
bool check_segments(std::span<const CountryId> countries, const PolicyConfig& policy);
inline bool check_segments(const Cycle& c, const PolicyConfig& policy) {
  return check_segments(c.countries, policy);
}

/// Local cycles are judged by their country's national cap only; international
/// ones by the international cap plus the country and segment checks. Chains
/// use the chain cap in place of the cycle caps.
bool is_valid_cycle(const Cycle& c, const PolicyConfig& policy);

/// Every policy-valid cycle of length <= K, canonical and duplicate-free, in
/// ascending order of first node. The search is a bounded DFS rooted at each
/// node over higher-numbered nodes; roots are spread over `workers` threads.
/// Throws ConfigError when K is unbounded.
std::vector<Cycle> enumerate_cycles(const CompatibilityGraph& g, const PolicyConfig& policy, int workers = 1);

/// Valid local cycles (length <= min(K^k, K)); works with unbounded K.
/// Throws ConfigError when a country with nodes has an unbounded cap and
/// `country` is not given or names that country.
std::vector<Cycle> enumerate_national_cycles(const CompatibilityGraph& g, const PolicyConfig& policy,
                                             std::optional<CountryId> country = std::nullopt);

/// Simple national paths with at most L^k nodes, singletons included, for one
/// country or all of them. Throws ConfigError if a requested L^k is unbounded.
std::vector<Segment> enumerate_segments(const CompatibilityGraph& g, const PolicyConfig& policy,
                                        std::optional<CountryId> country = std::nullopt);

/// Maximal same-country runs of a cyclic country sequence, as
/// (country, node count) pairs starting from a country boundary.
std::vector<std::pair<CountryId, int>> country_runs(std::span<const CountryId> countries);

}  // namespace kep
