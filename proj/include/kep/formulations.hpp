#pragma once

#include <optional>
#include <span>

#include "kep/enumeration.hpp"
#include "kep/ip_model.hpp"
#include "kep/policy.hpp"

namespace kep {

/// Cycle formulation: one x_c per cycle, each node in at most one selected
/// cycle. Objective weights default to the cycles' own weights (node count for
/// unit arcs). Throws InvariantError if a cycle names a node >= num_nodes.
IpModel build_cycle_model(std::span<const Cycle> cycles, int num_nodes,
                          std::optional<std::span<const double>> weights = std::nullopt);

/// Edge formulation with cycle length cap K: flow conservation, out-degree <= 1
/// and, for every proper directed path with K arcs, at most K-1 of them chosen.
/// Throws ConfigError for unbounded K.
IpModel build_edge_model(const CompatibilityGraph& g, Cap max_cycle_length);

/// Edge formulation without length caps (conservation and out-degree only).
IpModel build_circulation_model(const CompatibilityGraph& g);

/// National cycles as x_c, segments as z_s, arcs split into national (yn) and
/// international (yi) use, linked so a node is covered by one national cycle
/// or one segment of an international cycle. Length caps are path constraints
/// on the split arc variables. Segment-count, pair-count and country-count
/// caps, when they can bind, are added through layers (`layers` defaults to
/// floor(|V|/2)).
IpModel build_mixed_model(const CompatibilityGraph& g, std::span<const Cycle> national_cycles,
                          std::span<const Segment> segments, const PolicyConfig& policy,
                          std::optional<int> layers = std::nullopt);

/// Copies every international arc variable into `layers` layers and caps, per
/// layer, the segments and pairs of each country and the number of countries.
/// Throws ConfigError if layers <= 0.
void add_layer_constraints(IpModel& model, const CompatibilityGraph& g, int layers, const PolicyConfig& policy);

/// True when a segment, pair or country-count cap could cut an international
/// cycle of `g` (i.e. the layer machinery is needed).
bool layer_caps_can_bind(const CompatibilityGraph& g, const PolicyConfig& policy);

/// Two-country model where `bounded_country` uses enumerated national cycles and
/// segments while the other country has unbounded national cycles and segments.
/// Arc variables exist for every arc not internal to the bounded country. Each
/// bounded node with an arc into the other country owns one layer and its
/// outgoing international arcs live only there, which pins every international
/// cycle to a single segment per country. Layer 0 carries national cycles of
/// the unbounded country. Throws ConfigError for graphs without exactly two
/// countries.
IpModel build_bounded_unbounded_model(const CompatibilityGraph& g, std::span<const Cycle> bounded_cycles,
                                      std::span<const Segment> bounded_segments, CountryId bounded_country = 1);

/// Mixed model with national cycles and segments enumerated from `policy`.
/// Segment caps are clipped to K-1 nodes for enumeration when K is finite.
IpModel build_mixed_model(const CompatibilityGraph& g, const PolicyConfig& policy,
                          std::optional<int> layers = std::nullopt);

/// Bounded/unbounded model for a two-country policy where exactly one
/// country has an unbounded cycle cap; the other country is enumerated.
/// Throws ConfigError for any other policy shape.
IpModel build_bounded_unbounded_model(const CompatibilityGraph& g, const PolicyConfig& policy);

/// Calls fn(path) for every simple directed path with exactly `arcs` arcs whose
/// nodes all pass `allowed`.
template <typename Allowed, typename Fn>
void for_each_proper_path(const CompatibilityGraph& g, int arcs, const Allowed& allowed, const Fn& fn);

}  // namespace kep

#include "kep/detail/paths.hpp"
