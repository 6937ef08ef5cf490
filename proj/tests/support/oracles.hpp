#pragma once

// Brute-force reference implementations used only by the tests. They share
// no code with the library beyond the graph container.

#include <random>
#include <utility>
#include <vector>

#include "kep/graph.hpp"
#include "kep/policy.hpp"

namespace oracle {

using kep::CompatibilityGraph;
using kep::CountryId;
using kep::NodeId;
using kep::PolicyConfig;
using NodeList = std::vector<NodeId>;

/// Pair nodes with the given countries plus the listed unit arcs.
CompatibilityGraph graph(const std::vector<CountryId>& countries, const std::vector<std::pair<int, int>>& arcs,
                         int num_countries = 0);

/// Random pair-only digraph; every node gets a uniformly random country.
CompatibilityGraph random_graph(std::mt19937_64& rng, int n, double density, int num_countries);

/// Random finite policy on two countries: every cap drawn independently.
PolicyConfig random_finite_policy(std::mt19937_64& rng, int num_countries);

/// Policy test written from the definitions: length caps, per-country pair
/// counts, country count, and the maximal same-country runs around the cycle.
bool valid_cycle(const CompatibilityGraph& g, const NodeList& cycle, const PolicyConfig& policy);

/// Every arc-closed node sequence up to max_len, found by trying each subset
/// and each ordering of it; rotated so the smallest node leads, sorted.
std::vector<NodeList> cycles_by_permutation(const CompatibilityGraph& g, int max_len);

/// Every simple cycle, found by extending paths from every start node and
/// deduplicating rotations. `max_len` <= 0 means no limit.
std::vector<NodeList> simple_cycles(const CompatibilityGraph& g, int max_len = 0);

/// Maximum total weight of node-disjoint cycles (weights = node counts unless
/// given). Dynamic programme over node subsets, n <= 20.
double max_packing(int n, const std::vector<NodeList>& cycles, const std::vector<double>& weights = {});

/// Best transplant count with altruistic chains (altruist followed by pair
/// nodes along arcs, at most chain_cap transplants) and pair-only cycles of
/// at most cycle_cap nodes, on a graph before any chain reduction.
int max_chains_and_cycles(const CompatibilityGraph& g, int cycle_cap, int chain_cap);

}  // namespace oracle
