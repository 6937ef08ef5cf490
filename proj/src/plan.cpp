#include "kep/plan.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "kep/instance.hpp"

namespace kep {

int ExchangePlan::total_transplants() const { return std::accumulate(per_country.begin(), per_country.end(), 0); }

std::vector<NodeId> ExchangePlan::covered_nodes() const {
  std::vector<NodeId> out;
  for (const Cycle& c : cycles) out.insert(out.end(), c.nodes.begin(), c.nodes.end());
  for (const Chain& c : chains) out.insert(out.end(), c.nodes.begin(), c.nodes.end());
  std::sort(out.begin(), out.end());
  return out;
}

ExchangePlan make_plan(const CompatibilityGraph& g, std::vector<Cycle> cycles) {
  ExchangePlan plan;
  plan.per_country.assign(static_cast<std::size_t>(g.num_countries()), 0);
  for (Cycle& c : cycles) {
    auto artificial = std::find_if(c.nodes.begin(), c.nodes.end(),
                                   [&](NodeId v) { return g.node(v).kind == NodeKind::ArtificialPatient; });
    if (artificial == c.nodes.end()) {
      for (NodeId v : c.nodes) ++plan.per_country[static_cast<std::size_t>(g.country(v) - 1)];
      plan.cycles.push_back(std::move(c));
      continue;
    }
    Chain chain;
    std::rotate_copy(c.nodes.begin(), artificial, c.nodes.end(), std::back_inserter(chain.nodes));
    for (std::size_t i = 1; i < chain.nodes.size(); ++i) {
      const NodeId v = chain.nodes[i];
      if (g.node(v).kind == NodeKind::ArtificialPatient) throw InvariantError("chain passes through two altruists");
      ++plan.per_country[static_cast<std::size_t>(g.country(v) - 1)];
    }
    plan.chains.push_back(std::move(chain));
  }
  std::sort(plan.cycles.begin(), plan.cycles.end(),
            [](const Cycle& a, const Cycle& b) { return a.nodes < b.nodes; });
  std::sort(plan.chains.begin(), plan.chains.end(),
            [](const Chain& a, const Chain& b) { return a.nodes < b.nodes; });
  return plan;
}

ExchangePlan decode(const IpModel& model, const Assignment& assignment, const CompatibilityGraph& g) {
  if (assignment.values.size() != static_cast<std::size_t>(model.num_variables())) {
    throw InvariantError("assignment does not match the model");
  }
  std::vector<Cycle> cycles;
  std::set<std::pair<NodeId, NodeId>> arcs;
  for (int i = 0; i < model.num_variables(); ++i) {
    if (!assignment.values[static_cast<std::size_t>(i)]) continue;
    const VarInfo& info = model.variable(VarId{i});
    switch (info.kind) {
      case VarKind::Cycle: cycles.push_back(model.cycles()[static_cast<std::size_t>(info.item)]); break;
      case VarKind::Segment: {
        const Segment& s = model.segments()[static_cast<std::size_t>(info.item)];
        for (std::size_t k = 0; k + 1 < s.nodes.size(); ++k) arcs.emplace(s.nodes[k], s.nodes[k + 1]);
        break;
      }
      case VarKind::Edge:
      case VarKind::InternationalEdge: arcs.emplace(info.source, info.target); break;
      default: break;  // national arcs mirror cycle variables; layers mirror edges
    }
  }
  const int n = g.num_nodes();
  std::vector<NodeId> next(static_cast<std::size_t>(n), kNoNode);
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (auto [s, t] : arcs) {
    if (next[static_cast<std::size_t>(s)] != kNoNode) throw InvariantError("node " + std::to_string(s) + " gives twice");
    next[static_cast<std::size_t>(s)] = t;
    if (++indegree[static_cast<std::size_t>(t)] > 1) throw InvariantError("node " + std::to_string(t) + " receives twice");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (NodeId start = 0; start < n; ++start) {
    if (next[static_cast<std::size_t>(start)] == kNoNode || seen[static_cast<std::size_t>(start)]) continue;
    std::vector<NodeId> walk;
    NodeId v = start;
    while (!seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = 1;
      walk.push_back(v);
      v = next[static_cast<std::size_t>(v)];
      if (v == kNoNode) throw InvariantError("selected arcs end in an open path at node " + std::to_string(walk.back()));
    }
    if (v != start) throw InvariantError("selected arcs do not close into a cycle at node " + std::to_string(start));
    cycles.push_back(make_cycle(g, walk));
  }
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (const Cycle& c : cycles) {
    for (NodeId v : c.nodes) {
      if (used[static_cast<std::size_t>(v)]++) throw InvariantError("node " + std::to_string(v) + " is in two exchanges");
    }
  }
  return make_plan(g, std::move(cycles));
}

ExchangePlan lift_plan(const ExchangePlan& plan, std::span<const NodeId> origin, const CompatibilityGraph& parent) {
  std::vector<Cycle> cycles;
  auto lift = [&](std::span<const NodeId> nodes) {
    std::vector<NodeId> out;
    for (NodeId v : nodes) out.push_back(origin[static_cast<std::size_t>(v)]);
    return make_cycle(parent, out);
  };
  for (const Cycle& c : plan.cycles) cycles.push_back(lift(c.nodes));
  for (const Chain& c : plan.chains) cycles.push_back(lift(c.nodes));
  return make_plan(parent, std::move(cycles));
}

ExchangePlan merge_plans(const CompatibilityGraph& g, std::span<const ExchangePlan> plans) {
  std::vector<Cycle> cycles;
  std::vector<char> used(static_cast<std::size_t>(g.num_nodes()), 0);
  auto add = [&](std::span<const NodeId> nodes) {
    for (NodeId v : nodes) {
      if (used[static_cast<std::size_t>(v)]++) throw InvariantError("plans overlap at node " + std::to_string(v));
    }
    cycles.push_back(make_cycle(g, nodes));
  };
  for (const ExchangePlan& p : plans) {
    for (const Cycle& c : p.cycles) add(c.nodes);
    for (const Chain& c : p.chains) add(c.nodes);
  }
  return make_plan(g, std::move(cycles));
}

std::string validate_plan(const ExchangePlan& plan, const CompatibilityGraph& original, const PolicyConfig& policy) {
  const bool altruists = std::any_of(original.nodes().begin(), original.nodes().end(),
                                     [](const Node& n) { return n.kind == NodeKind::AltruisticDonor; });
  std::optional<CompatibilityGraph> reduced;
  if (altruists) reduced = reduce_chains_to_cycles(original);
  const CompatibilityGraph& g = reduced ? *reduced : original;
  std::vector<char> used(static_cast<std::size_t>(g.num_nodes()), 0);
  auto check = [&](std::span<const NodeId> nodes) -> std::string {
    for (NodeId v : nodes) {
      if (v < 0 || v >= g.num_nodes()) return "unknown node " + std::to_string(v);
      if (used[static_cast<std::size_t>(v)]++) return "node " + std::to_string(v) + " used twice";
    }
    Cycle c;
    try {
      c = make_cycle(g, nodes);
    } catch (const InvariantError& e) {
      return e.what();
    }
    if (!is_valid_cycle(c, policy)) {
      std::ostringstream out;
      out << "exchange";
      for (NodeId v : c.nodes) out << ' ' << v;
      out << " violates the policy";
      return out.str();
    }
    return {};
  };
  for (const Cycle& c : plan.cycles) {
    if (auto err = check(c.nodes); !err.empty()) return err;
  }
  for (const Chain& c : plan.chains) {
    if (auto err = check(c.nodes); !err.empty()) return err;
  }
  return {};
}

std::string format_plan(const ExchangePlan& plan) {
  std::ostringstream out;
  for (const Cycle& c : plan.cycles) {
    out << (c.international ? "international" : "national") << " cycle:";
    for (std::size_t i = 0; i < c.nodes.size(); ++i) out << ' ' << c.nodes[i] << "(C" << c.countries[i] << ')';
    out << '\n';
  }
  for (const Chain& c : plan.chains) {
    out << "chain:";
    for (NodeId v : c.nodes) out << ' ' << v;
    out << '\n';
  }
  for (std::size_t k = 0; k < plan.per_country.size(); ++k) {
    out << "country " << k + 1 << ": " << plan.per_country[k] << " transplants\n";
  }
  return out.str();
}

}  // namespace kep
