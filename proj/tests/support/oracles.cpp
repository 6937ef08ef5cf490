#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace oracle {

CompatibilityGraph graph(const std::vector<CountryId>& countries, const std::vector<std::pair<int, int>>& arcs,
                         int num_countries) {
  if (num_countries == 0) {
    num_countries = countries.empty() ? 1 : *std::max_element(countries.begin(), countries.end());
  }
  CompatibilityGraph g(num_countries);
  for (CountryId k : countries) {
    g.add_node(k, kep::NodeKind::PatientDonorPair, kep::BloodGroup::O, kep::BloodGroup::O, 0.0);
  }
  for (auto [s, t] : arcs) g.add_arc(s, t);
  return g;
}

CompatibilityGraph random_graph(std::mt19937_64& rng, int n, double density, int num_countries) {
  std::uniform_int_distribution<int> country(1, num_countries);
  std::bernoulli_distribution arc(density);
  std::vector<CountryId> countries;
  for (int i = 0; i < n; ++i) countries.push_back(country(rng));
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && arc(rng)) arcs.emplace_back(i, j);
    }
  }
  return graph(countries, arcs, num_countries);
}

PolicyConfig random_finite_policy(std::mt19937_64& rng, int num_countries) {
  auto pick = [&](int lo, int hi, bool allow_inf) {
    std::uniform_int_distribution<int> d(lo, allow_inf ? hi + 1 : hi);
    const int v = d(rng);
    return v > hi ? kep::Cap::unbounded() : kep::Cap(v);
  };
  PolicyConfig p;
  p.international_cycle_cap = pick(2, 5, false);
  p.max_countries_per_cycle = pick(1, 2, true);
  for (int k = 0; k < num_countries; ++k) {
    kep::CountryPolicy c;
    c.national_cycle_cap = pick(2, 5, false);
    c.segment_node_cap = pick(1, 4, true);
    c.max_segments_per_cycle = pick(1, 2, true);
    c.max_pairs_per_cycle = pick(1, 4, true);
    p.countries.push_back(c);
  }
  return p;
}

bool valid_cycle(const CompatibilityGraph& g, const NodeList& cycle, const PolicyConfig& policy) {
  const int len = static_cast<int>(cycle.size());
  if (!policy.international_cycle_cap.allows(len)) return false;
  std::map<CountryId, int> pairs;
  for (NodeId v : cycle) ++pairs[g.country(v)];
  if (pairs.size() == 1) return policy.country(pairs.begin()->first).national_cycle_cap.allows(len);
  for (auto [k, count] : pairs) {
    if (!policy.country(k).max_pairs_per_cycle.allows(count)) return false;
  }
  if (!policy.max_countries_per_cycle.allows(static_cast<long long>(pairs.size()))) return false;
  std::map<CountryId, int> runs;
  for (int i = 0; i < len; ++i) {
    const CountryId k = g.country(cycle[i]);
    if (g.country(cycle[(i + len - 1) % len]) == k) continue;  // not a run start
    int run = 1;
    while (g.country(cycle[(i + run) % len]) == k) ++run;
    if (!policy.country(k).segment_node_cap.allows(run)) return false;
    if (!policy.country(k).max_segments_per_cycle.allows(++runs[k])) return false;
  }
  return true;
}

std::vector<NodeList> cycles_by_permutation(const CompatibilityGraph& g, int max_len) {
  const int n = g.num_nodes();
  std::vector<NodeList> out;
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < 2 || size > max_len) continue;
    NodeList nodes;
    for (int v = 0; v < n; ++v) {
      if (mask & (1U << v)) nodes.push_back(v);
    }
    // nodes[0] is the smallest; permute the rest.
    do {
      bool closed = true;
      for (int i = 0; i < size && closed; ++i) closed = g.has_arc(nodes[i], nodes[(i + 1) % size]);
      if (closed) out.push_back(nodes);
    } while (std::next_permutation(nodes.begin() + 1, nodes.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeList> simple_cycles(const CompatibilityGraph& g, int max_len) {
  const int n = g.num_nodes();
  std::set<NodeList> found;
  NodeList path;
  std::vector<char> on(static_cast<std::size_t>(n), 0);
  std::function<void(NodeId)> walk = [&](NodeId v) {
    for (NodeId w = 0; w < n; ++w) {
      if (!g.has_arc(v, w)) continue;
      if (w == path.front()) {
        NodeList c = path;
        std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
        found.insert(c);
      } else if (!on[static_cast<std::size_t>(w)] && (max_len <= 0 || static_cast<int>(path.size()) < max_len) &&
                 w > path.front()) {
        path.push_back(w);
        on[static_cast<std::size_t>(w)] = 1;
        walk(w);
        on[static_cast<std::size_t>(w)] = 0;
        path.pop_back();
      }
    }
  };
  for (NodeId s = 0; s < n; ++s) {
    path = {s};
    on[static_cast<std::size_t>(s)] = 1;
    walk(s);
    on[static_cast<std::size_t>(s)] = 0;
  }
  return {found.begin(), found.end()};
}

double max_packing(int n, const std::vector<NodeList>& cycles, const std::vector<double>& weights) {
  std::vector<std::vector<std::pair<unsigned, double>>> by_min(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    unsigned mask = 0;
    for (NodeId v : cycles[i]) mask |= 1U << v;
    const double w = weights.empty() ? static_cast<double>(cycles[i].size()) : weights[i];
    by_min[static_cast<std::size_t>(*std::min_element(cycles[i].begin(), cycles[i].end()))].emplace_back(mask, w);
  }
  std::unordered_map<unsigned, double> memo;
  std::function<double(unsigned)> best = [&](unsigned used) -> double {
    int v = 0;
    while (v < n && (used & (1U << v))) ++v;
    if (v == n) return 0.0;
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    double result = best(used | (1U << v));
    for (auto [mask, w] : by_min[static_cast<std::size_t>(v)]) {
      if (!(mask & used)) result = std::max(result, w + best(used | mask));
    }
    memo.emplace(used, result);
    return result;
  };
  return best(0);
}

int max_chains_and_cycles(const CompatibilityGraph& g, int cycle_cap, int chain_cap) {
  const int n = g.num_nodes();
  // Every option as (node mask, transplants).
  std::vector<std::pair<unsigned, int>> options;
  for (const NodeList& c : simple_cycles(g, cycle_cap)) {
    bool pairs_only = std::all_of(c.begin(), c.end(), [&](NodeId v) { return g.node(v).has_patient(); });
    if (!pairs_only) continue;
    unsigned mask = 0;
    for (NodeId v : c) mask |= 1U << v;
    options.emplace_back(mask, static_cast<int>(c.size()));
  }
  std::function<void(NodeId, unsigned, int)> grow = [&](NodeId v, unsigned mask, int transplants) {
    if (transplants > 0) options.emplace_back(mask, transplants);
    if (transplants == chain_cap) return;
    for (NodeId w = 0; w < n; ++w) {
      if ((mask & (1U << w)) || !g.has_arc(v, w) || !g.node(w).has_patient()) continue;
      grow(w, mask | (1U << w), transplants + 1);
    }
  };
  for (NodeId a = 0; a < n; ++a) {
    if (g.node(a).kind == kep::NodeKind::AltruisticDonor) grow(a, 1U << a, 0);
  }
  std::vector<NodeList> sets;
  std::vector<double> weights;
  for (auto [mask, transplants] : options) {
    NodeList nodes;
    for (NodeId v = 0; v < n; ++v) {
      if (mask & (1U << v)) nodes.push_back(v);
    }
    sets.push_back(nodes);
    weights.push_back(transplants);
  }
  return static_cast<int>(max_packing(n, sets, weights) + 0.5);
}

}  // namespace oracle
