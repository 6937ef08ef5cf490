#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kep/types.hpp"

namespace kep {

enum class BloodGroup : std::uint8_t { O, A, B, AB };

/// ABO rule: O gives to all, A to A/AB, B to B/AB, AB to AB only.
constexpr bool abo_compatible(BloodGroup donor, BloodGroup patient) {
  switch (donor) {
    case BloodGroup::O: return true;
    case BloodGroup::A: return patient == BloodGroup::A || patient == BloodGroup::AB;
    case BloodGroup::B: return patient == BloodGroup::B || patient == BloodGroup::AB;
    case BloodGroup::AB: return patient == BloodGroup::AB;
  }
  return false;
}

std::string_view to_string(BloodGroup g);
std::optional<BloodGroup> parse_blood_group(std::string_view text);

enum class NodeKind : std::uint8_t {
  PatientDonorPair,
  AltruisticDonor,
  // An altruist after chain reduction: its artificial patient accepts every donor.
  ArtificialPatient,
};

std::string_view to_string(NodeKind k);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct Node {
  NodeId id = kNoNode;
  CountryId country = 1;
  NodeKind kind = NodeKind::PatientDonorPair;
  BloodGroup donor_blood = BloodGroup::O;
  // Absent for altruists and artificial patients.
  std::optional<BloodGroup> patient_blood;
  std::optional<double> patient_pra;

  bool has_patient() const { return kind == NodeKind::PatientDonorPair; }
};

struct Arc {
  NodeId source = kNoNode;
  NodeId target = kNoNode;
  double weight = 1.0;
};

/// Country-partitioned compatibility digraph. Arcs are indexed by source, by
/// target and by target country, so A^k ("donations into country k") is a
/// direct lookup.
class CompatibilityGraph {
 public:
  explicit CompatibilityGraph(int num_countries = 1);

  /// Appends a node; its id is the next dense index.
  NodeId add_node(CountryId country, NodeKind kind, BloodGroup donor_blood,
                  std::optional<BloodGroup> patient_blood = std::nullopt,
                  std::optional<double> patient_pra = std::nullopt);
  /// Throws InvariantError on self-arcs, duplicates or unknown endpoints.
  void add_arc(NodeId source, NodeId target, double weight = 1.0);

  int num_countries() const { return num_countries_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Arc> arcs() const { return arcs_; }
  const Arc& arc(int index) const { return arcs_.at(static_cast<std::size_t>(index)); }
  CountryId country(NodeId id) const { return node(id).country; }

  /// Arc indices leaving / entering a node.
  std::span<const int> out_arcs(NodeId id) const { return out_[static_cast<std::size_t>(id)]; }
  std::span<const int> in_arcs(NodeId id) const { return in_[static_cast<std::size_t>(id)]; }
  /// Arc indices whose target lies in country k (A^k).
  std::span<const int> arcs_into_country(CountryId k) const;
  /// Node ids of country k, ascending (V^k).
  std::vector<NodeId> country_nodes(CountryId k) const;

  std::optional<int> find_arc(NodeId source, NodeId target) const;
  bool has_arc(NodeId source, NodeId target) const { return find_arc(source, target).has_value(); }
  double arc_weight(NodeId source, NodeId target) const;

  bool is_national(const Arc& a) const { return country(a.source) == country(a.target); }

 private:
  static std::uint64_t key(NodeId s, NodeId t) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 32) | static_cast<std::uint32_t>(t);
  }

  int num_countries_;
  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> by_target_country_;
  std::unordered_map<std::uint64_t, int> arc_lookup_;
};

/// Induced subgraph with the map from its dense ids back to the parent graph.
struct Subgraph {
  CompatibilityGraph graph;
  std::vector<NodeId> origin;  // origin[local id] = parent id
};

/// Induced subgraph on `keep` (order preserved, duplicates rejected). Countries
/// keep their numbering.
Subgraph induced_subgraph(const CompatibilityGraph& g, std::span<const NodeId> keep);

/// Induced subgraph on V^k. Throws ConfigError for an unknown country.
Subgraph country_subgraph(const CompatibilityGraph& g, CountryId k);

}  // namespace kep
