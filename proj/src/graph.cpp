#include "kep/graph.hpp"

#include <algorithm>
#include <charconv>
#include <string>

namespace kep {

Cap Cap::parse(std::string_view text) {
  if (text == "inf" || text == "INF" || text == "Inf" || text == "∞") return Cap::unbounded();
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw ConfigError("invalid bound '" + std::string(text) + "' (expected a non-negative integer or inf)");
  }
  return Cap(value);
}

std::string_view to_string(BloodGroup g) {
  switch (g) {
    case BloodGroup::O: return "O";
    case BloodGroup::A: return "A";
    case BloodGroup::B: return "B";
    case BloodGroup::AB: return "AB";
  }
  return "?";
}

std::optional<BloodGroup> parse_blood_group(std::string_view text) {
  if (text == "O") return BloodGroup::O;
  if (text == "A") return BloodGroup::A;
  if (text == "B") return BloodGroup::B;
  if (text == "AB") return BloodGroup::AB;
  return std::nullopt;
}

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::PatientDonorPair: return "pair";
    case NodeKind::AltruisticDonor: return "altruist";
    case NodeKind::ArtificialPatient: return "artificial";
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "pair") return NodeKind::PatientDonorPair;
  if (text == "altruist") return NodeKind::AltruisticDonor;
  if (text == "artificial") return NodeKind::ArtificialPatient;
  return std::nullopt;
}

CompatibilityGraph::CompatibilityGraph(int num_countries)
    : num_countries_(num_countries), by_target_country_(static_cast<std::size_t>(std::max(num_countries, 0))) {
  if (num_countries < 1) throw ConfigError("a compatibility graph needs at least one country");
}

NodeId CompatibilityGraph::add_node(CountryId country, NodeKind kind, BloodGroup donor_blood,
                                    std::optional<BloodGroup> patient_blood,
                                    std::optional<double> patient_pra) {
  if (country < 1 || country > num_countries_) {
    throw InvariantError("country " + std::to_string(country) + " outside 1.." + std::to_string(num_countries_));
  }
  const bool patient = kind == NodeKind::PatientDonorPair;
  if (patient != patient_blood.has_value() || patient != patient_pra.has_value()) {
    throw InvariantError(patient ? "patient-donor pair without patient attributes"
                                 : "donor-only node with patient attributes");
  }
  if (patient_pra && (*patient_pra < 0.0 || *patient_pra > 1.0)) {
    throw InvariantError("PRA outside [0,1]");
  }
  const NodeId id = num_nodes();
  nodes_.push_back(Node{id, country, kind, donor_blood, patient_blood, patient_pra});
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

void CompatibilityGraph::add_arc(NodeId source, NodeId target, double weight) {
  if (source < 0 || source >= num_nodes() || target < 0 || target >= num_nodes()) {
    throw InvariantError("arc endpoint does not exist");
  }
  if (source == target) throw InvariantError("self-arc on node " + std::to_string(source));
  if (!(weight >= 0.0)) throw InvariantError("negative arc weight");
  const int index = num_arcs();
  if (!arc_lookup_.emplace(key(source, target), index).second) {
    throw InvariantError("duplicate arc " + std::to_string(source) + "->" + std::to_string(target));
  }
  arcs_.push_back(Arc{source, target, weight});
  out_[static_cast<std::size_t>(source)].push_back(index);
  in_[static_cast<std::size_t>(target)].push_back(index);
  by_target_country_[static_cast<std::size_t>(country(target) - 1)].push_back(index);
}

std::span<const int> CompatibilityGraph::arcs_into_country(CountryId k) const {
  if (k < 1 || k > num_countries_) throw ConfigError("unknown country " + std::to_string(k));
  return by_target_country_[static_cast<std::size_t>(k - 1)];
}

std::vector<NodeId> CompatibilityGraph::country_nodes(CountryId k) const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_) {
    if (n.country == k) out.push_back(n.id);
  }
  return out;
}

std::optional<int> CompatibilityGraph::find_arc(NodeId source, NodeId target) const {
  auto it = arc_lookup_.find(key(source, target));
  if (it == arc_lookup_.end()) return std::nullopt;
  return it->second;
}

double CompatibilityGraph::arc_weight(NodeId source, NodeId target) const {
  auto idx = find_arc(source, target);
  if (!idx) throw InvariantError("no arc " + std::to_string(source) + "->" + std::to_string(target));
  return arcs_[static_cast<std::size_t>(*idx)].weight;
}

Subgraph induced_subgraph(const CompatibilityGraph& g, std::span<const NodeId> keep) {
  Subgraph sub{CompatibilityGraph(g.num_countries()), {}};
  std::vector<NodeId> local(static_cast<std::size_t>(g.num_nodes()), kNoNode);
  for (NodeId v : keep) {
    const Node& n = g.node(v);
    if (local[static_cast<std::size_t>(v)] != kNoNode) throw InvariantError("duplicate node in subgraph selection");
    local[static_cast<std::size_t>(v)] =
        sub.graph.add_node(n.country, n.kind, n.donor_blood, n.patient_blood, n.patient_pra);
    sub.origin.push_back(v);
  }
  for (NodeId v : keep) {
    for (int a : g.out_arcs(v)) {
      const Arc& arc = g.arc(a);
      const NodeId t = local[static_cast<std::size_t>(arc.target)];
      if (t != kNoNode) sub.graph.add_arc(local[static_cast<std::size_t>(v)], t, arc.weight);
    }
  }
  return sub;
}

Subgraph country_subgraph(const CompatibilityGraph& g, CountryId k) {
  if (k < 1 || k > g.num_countries()) throw ConfigError("unknown country " + std::to_string(k));
  const std::vector<NodeId> members = g.country_nodes(k);
  return induced_subgraph(g, members);
}

}  // namespace kep
