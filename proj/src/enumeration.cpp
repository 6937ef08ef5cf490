#include "kep/enumeration.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <thread>

namespace kep {
namespace {

Cap chain_dfs_cap(const PolicyConfig& policy) {
  if (!policy.chains_enabled) return Cap(0);
  return policy.chain_cap.finite() ? Cap(policy.chain_cap.value() + 1) : Cap::unbounded();
}

bool has_artificial(const CompatibilityGraph& g) {
  return std::any_of(g.nodes().begin(), g.nodes().end(),
                     [](const Node& n) { return n.kind == NodeKind::ArtificialPatient; });
}

// Simple cycles whose smallest node is `root`, with at most `max_len` nodes and
// every node accepted by `allowed`.
template <typename Allowed, typename Emit>
void search_root(const CompatibilityGraph& g, NodeId root, int max_len, const Allowed& allowed, const Emit& emit) {
  std::vector<NodeId> path{root};
  std::vector<char> on_path(static_cast<std::size_t>(g.num_nodes()), 0);
  on_path[static_cast<std::size_t>(root)] = 1;
  std::function<void(NodeId)> dfs = [&](NodeId v) {
    for (int a : g.out_arcs(v)) {
      const NodeId t = g.arc(a).target;
      if (t == root) {
        if (path.size() >= 2) emit(path);
        continue;
      }
      if (t < root || on_path[static_cast<std::size_t>(t)] || !allowed(t)) continue;
      if (static_cast<int>(path.size()) >= max_len) continue;
      path.push_back(t);
      on_path[static_cast<std::size_t>(t)] = 1;
      dfs(t);
      on_path[static_cast<std::size_t>(t)] = 0;
      path.pop_back();
    }
  };
  dfs(root);
}

void sort_cycles(std::vector<Cycle>& cycles) {
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) { return a.nodes < b.nodes; });
}

}  // namespace

Cycle make_cycle(const CompatibilityGraph& g, std::span<const NodeId> nodes) {
  if (nodes.size() < 2) throw InvariantError("a cycle needs at least two nodes");
  const auto min_it = std::min_element(nodes.begin(), nodes.end());
  Cycle c;
  c.nodes.assign(min_it, nodes.end());
  c.nodes.insert(c.nodes.end(), nodes.begin(), min_it);
  std::set<NodeId> seen;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const NodeId v = c.nodes[i];
    if (!seen.insert(v).second) throw InvariantError("cycle repeats node " + std::to_string(v));
    const NodeId next = c.nodes[(i + 1) % c.nodes.size()];
    c.weight += g.arc_weight(v, next);
    c.countries.push_back(g.country(v));
    if (g.node(v).kind == NodeKind::ArtificialPatient) {
      c.chain = true;
      ++c.artificial_nodes;
    }
  }
  c.international = !is_local(c.countries);
  return c;
}

Segment make_segment(const CompatibilityGraph& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw InvariantError("empty segment");
  Segment s;
  s.nodes.assign(nodes.begin(), nodes.end());
  s.country = g.country(nodes.front());
  std::set<NodeId> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (g.country(nodes[i]) != s.country) throw InvariantError("segment crosses a border");
    if (!seen.insert(nodes[i]).second) throw InvariantError("segment repeats a node");
    if (i + 1 < nodes.size()) s.weight += g.arc_weight(nodes[i], nodes[i + 1]);
  }
  return s;
}

bool is_local(std::span<const CountryId> countries) {
  for (std::size_t i = 1; i < countries.size(); ++i) {
    if (countries[i] != countries[0]) return false;
  }
  return true;
}

bool check_countries(std::span<const CountryId> countries, const PolicyConfig& policy) {
  std::map<CountryId, int> count;
  for (CountryId k : countries) {
    if (!policy.country(k).max_pairs_per_cycle.allows(++count[k])) return false;
  }
  return policy.max_countries_per_cycle.allows(static_cast<long long>(count.size()));
}

std::vector<std::pair<CountryId, int>> country_runs(std::span<const CountryId> countries) {
  std::vector<std::pair<CountryId, int>> runs;
  const std::size_t n = countries.size();
  if (n == 0) return runs;
  // Start at a border so the run through position 0 is not split in two.
  std::size_t start = 0;
  while (start < n && countries[start] == countries[(start + n - 1) % n]) ++start;
  if (start == n) return {{countries[0], static_cast<int>(n)}};
  for (std::size_t step = 0; step < n; ++step) {
    const CountryId k = countries[(start + step) % n];
    if (runs.empty() || runs.back().first != k) {
      runs.emplace_back(k, 1);
    } else {
      ++runs.back().second;
    }
  }
  return runs;
}

bool check_segments(std::span<const CountryId> countries, const PolicyConfig& policy) {
  std::map<CountryId, int> segments;
  for (auto [k, nodes] : country_runs(countries)) {
    const CountryPolicy& cp = policy.country(k);
    // Caps are in nodes; an l-node run has l-1 national arcs.
    if (!cp.segment_node_cap.allows(nodes)) return false;
    if (!cp.max_segments_per_cycle.allows(++segments[k])) return false;
  }
  return true;
}

bool is_valid_cycle(const Cycle& c, const PolicyConfig& policy) {
  const auto len = static_cast<long long>(c.size());
  if (c.chain) {
    if (c.artificial_nodes > 1) return false;
    if (!policy.chains_enabled || !policy.chain_cap.allows(len - 1)) return false;
    return is_local(c) || (check_countries(c, policy) && check_segments(c, policy));
  }
  if (is_local(c)) return policy.country(c.countries.front()).national_cycle_cap.allows(len);
  return policy.international_cycle_cap.allows(len) && check_countries(c, policy) && check_segments(c, policy);
}

std::vector<Cycle> enumerate_cycles(const CompatibilityGraph& g, const PolicyConfig& policy, int workers) {
  if (!policy.international_cycle_cap.finite()) {
    throw ConfigError(
        "cycle enumeration needs a finite international cycle cap; use the mixed or bounded/unbounded "
        "(atcz) model for unbounded policies");
  }
  if (policy.num_countries() < g.num_countries()) throw ConfigError("policy covers fewer countries than the graph");
  int cap = policy.international_cycle_cap.value();
  if (has_artificial(g)) {
    const Cap chain_cap = chain_dfs_cap(policy);
    if (!chain_cap.finite()) throw ConfigError("cycle enumeration needs a finite chain cap");
    cap = std::max(cap, chain_cap.value());
  }
  const int n = g.num_nodes();
  std::vector<std::vector<Cycle>> per_root(static_cast<std::size_t>(n));
  auto all = [](NodeId) { return true; };
  auto run_root = [&](NodeId root) {
    auto& out = per_root[static_cast<std::size_t>(root)];
    search_root(g, root, cap, all, [&](const std::vector<NodeId>& path) {
      Cycle c = make_cycle(g, path);
      // Chains may run longer than K; ordinary cycles may not.
      if (!c.chain && !policy.international_cycle_cap.allows(static_cast<long long>(c.size()))) return;
      if (is_valid_cycle(c, policy)) out.push_back(std::move(c));
    });
  };
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (NodeId r = 0; r < n; ++r) run_root(r);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (NodeId r = w; r < n; r += workers) run_root(r);
      });
    }
  }
  std::vector<Cycle> result;
  for (auto& bucket : per_root) {
    for (auto& c : bucket) result.push_back(std::move(c));
  }
  sort_cycles(result);
  return result;
}

std::vector<Cycle> enumerate_national_cycles(const CompatibilityGraph& g, const PolicyConfig& policy,
                                             std::optional<CountryId> country) {
  std::vector<Cycle> result;
  const bool artificial = has_artificial(g);
  for (CountryId k = 1; k <= g.num_countries(); ++k) {
    if (country && *country != k) continue;
    const std::vector<NodeId> members = g.country_nodes(k);
    if (members.empty()) continue;
    Cap cap = std::min(policy.country(k).national_cycle_cap, policy.international_cycle_cap);
    if (artificial) cap = std::max(cap, chain_dfs_cap(policy));
    if (!cap.finite()) {
      throw ConfigError("country " + std::to_string(k) +
                        " has unbounded national cycles; they cannot be enumerated (use an edge-based model)");
    }
    auto in_country = [&](NodeId v) { return g.country(v) == k; };
    for (NodeId root : members) {
      search_root(g, root, cap.value(), in_country, [&](const std::vector<NodeId>& path) {
        Cycle c = make_cycle(g, path);
        if (!c.chain && !policy.international_cycle_cap.allows(static_cast<long long>(c.size()))) return;
        if (is_valid_cycle(c, policy)) result.push_back(std::move(c));
      });
    }
  }
  sort_cycles(result);
  return result;
}

std::vector<Segment> enumerate_segments(const CompatibilityGraph& g, const PolicyConfig& policy,
                                        std::optional<CountryId> country) {
  std::vector<Segment> result;
  for (CountryId k = 1; k <= g.num_countries(); ++k) {
    if (country && *country != k) continue;
    const Cap cap = policy.country(k).segment_node_cap;
    const std::vector<NodeId> members = g.country_nodes(k);
    if (members.empty()) continue;
    if (!cap.finite()) {
      throw ConfigError("country " + std::to_string(k) + " has unbounded segments; they cannot be enumerated");
    }
    std::vector<char> on_path(static_cast<std::size_t>(g.num_nodes()), 0);
    std::vector<NodeId> path;
    std::function<void(NodeId)> extend = [&](NodeId v) {
      path.push_back(v);
      on_path[static_cast<std::size_t>(v)] = 1;
      result.push_back(make_segment(g, path));
      if (static_cast<int>(path.size()) < cap.value()) {
        for (int a : g.out_arcs(v)) {
          const NodeId t = g.arc(a).target;
          if (g.country(t) == k && !on_path[static_cast<std::size_t>(t)]) extend(t);
        }
      }
      on_path[static_cast<std::size_t>(v)] = 0;
      path.pop_back();
    };
    for (NodeId start : members) extend(start);
  }
  return result;
}

}  // namespace kep
