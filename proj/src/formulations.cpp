#include "kep/formulations.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace kep {
namespace {

// Adds one variable per arc accepted by `select`, indexed by arc.
template <typename Select>
std::vector<std::optional<VarId>> add_arc_vars(IpModel& model, const CompatibilityGraph& g, VarKind kind,
                                               const Select& select, bool weighted) {
  std::vector<std::optional<VarId>> vars(static_cast<std::size_t>(g.num_arcs()));
  for (int a = 0; a < g.num_arcs(); ++a) {
    const Arc& arc = g.arc(a);
    if (!select(arc)) continue;
    VarInfo info{kind};
    info.source = arc.source;
    info.target = arc.target;
    vars[static_cast<std::size_t>(a)] = model.add_variable(info, weighted ? arc.weight : 0.0);
  }
  return vars;
}

// sum(in) - sum(out) == 0 at every node touching the selected variables.
void add_conservation(IpModel& model, const CompatibilityGraph& g, const std::vector<std::optional<VarId>>& vars,
                      std::string_view tag) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    std::vector<Term> terms;
    for (int a : g.in_arcs(v)) {
      if (auto var = vars[static_cast<std::size_t>(a)]) terms.push_back({*var, 1.0});
    }
    for (int a : g.out_arcs(v)) {
      if (auto var = vars[static_cast<std::size_t>(a)]) terms.push_back({*var, -1.0});
    }
    model.add_constraint(std::move(terms), Relation::Equal, 0.0, tag);
  }
}

// For every simple path of `arcs` arcs inside `allowed`: at most arcs-1 chosen.
template <typename Allowed>
void add_path_caps(IpModel& model, const CompatibilityGraph& g, const std::vector<std::optional<VarId>>& vars,
                   int arcs, const Allowed& allowed, std::string_view tag) {
  for_each_proper_path(g, arcs, allowed, [&](const std::vector<NodeId>& path) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const int a = *g.find_arc(path[i], path[i + 1]);
      if (auto var = vars[static_cast<std::size_t>(a)]) terms.push_back({*var, 1.0});
    }
    // Paths using arcs without a variable cannot be fully chosen anyway.
    if (static_cast<int>(terms.size()) == arcs) {
      model.add_constraint(std::move(terms), Relation::LessEqual, arcs - 1.0, tag);
    }
  });
}

void check_nodes(std::span<const NodeId> nodes, int num_nodes) {
  for (NodeId v : nodes) {
    if (v < 0 || v >= num_nodes) throw InvariantError("model references unknown node " + std::to_string(v));
  }
}

}  // namespace

IpModel build_cycle_model(std::span<const Cycle> cycles, int num_nodes, std::optional<std::span<const double>> weights) {
  if (weights && weights->size() != cycles.size()) throw InvariantError("one weight per cycle expected");
  IpModel model;
  std::vector<std::vector<Term>> rows(static_cast<std::size_t>(num_nodes));
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    check_nodes(cycles[i].nodes, num_nodes);
    VarInfo info{VarKind::Cycle};
    info.item = model.add_cycle(cycles[i]);
    const VarId x = model.add_variable(info, weights ? (*weights)[i] : cycles[i].weight);
    for (NodeId v : cycles[i].nodes) rows[static_cast<std::size_t>(v)].push_back({x, 1.0});
  }
  for (auto& row : rows) model.add_constraint(std::move(row), Relation::LessEqual, 1.0, tags::kNodePacking);
  return model;
}

IpModel build_circulation_model(const CompatibilityGraph& g) {
  IpModel model;
  const auto y = add_arc_vars(model, g, VarKind::Edge, [](const Arc&) { return true; }, true);
  add_conservation(model, g, y, tags::kFlowConservation);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    std::vector<Term> terms;
    for (int a : g.out_arcs(v)) terms.push_back({*y[static_cast<std::size_t>(a)], 1.0});
    model.add_constraint(std::move(terms), Relation::LessEqual, 1.0, tags::kOutDegree);
  }
  return model;
}

IpModel build_edge_model(const CompatibilityGraph& g, Cap max_cycle_length) {
  if (!max_cycle_length.finite()) {
    throw ConfigError(
        "the edge formulation needs a finite cycle cap; use the bounded/unbounded (atcz) model when one country "
        "is unbounded, or the mixed model");
  }
  if (max_cycle_length.value() < 2) throw ConfigError("cycle cap must be at least 2");
  IpModel model = build_circulation_model(g);
  std::vector<std::optional<VarId>> y(static_cast<std::size_t>(g.num_arcs()));
  for (int i = 0; i < model.num_variables(); ++i) {
    const VarInfo& info = model.variable(VarId{i});
    y[static_cast<std::size_t>(*g.find_arc(info.source, info.target))] = VarId{i};
  }
  add_path_caps(model, g, y, max_cycle_length.value(), [](NodeId) { return true; }, tags::kPathLength);
  return model;
}

bool layer_caps_can_bind(const CompatibilityGraph& g, const PolicyConfig& policy) {
  int populated = 0;
  for (CountryId k = 1; k <= g.num_countries(); ++k) {
    const int size = static_cast<int>(g.country_nodes(k).size());
    if (size > 0) ++populated;
    const CountryPolicy& cp = policy.country(k);
    if (cp.max_segments_per_cycle.finite() && cp.max_segments_per_cycle.value() < size) return true;
    if (cp.max_pairs_per_cycle.finite() && cp.max_pairs_per_cycle.value() < size) return true;
  }
  return policy.max_countries_per_cycle.finite() && policy.max_countries_per_cycle.value() < populated;
}

IpModel build_mixed_model(const CompatibilityGraph& g, std::span<const Cycle> national_cycles,
                          std::span<const Segment> segments, const PolicyConfig& policy, std::optional<int> layers) {
  policy.validate();
  if (policy.num_countries() < g.num_countries()) throw ConfigError("policy covers fewer countries than the graph");
  IpModel model;
  const int n = g.num_nodes();

  for (CountryId k = 1; k <= g.num_countries(); ++k) {
    const Cap seg = policy.country(k).segment_node_cap;
    const Cap K = policy.international_cycle_cap;
    if (seg.finite() && K.finite() && seg.value() > K.value() - 1) {
      model.warnings().push_back("country " + std::to_string(k) + " segment cap " + seg.to_string() +
                                 " exceeds what an international cycle of length " + K.to_string() + " can hold");
    }
  }

  const auto national = add_arc_vars(
      model, g, VarKind::NationalEdge, [&](const Arc& a) { return g.is_national(a); }, true);
  const auto international = add_arc_vars(model, g, VarKind::InternationalEdge, [](const Arc&) { return true; }, true);

  std::vector<std::vector<Term>> coverage(static_cast<std::size_t>(n));
  for (const Cycle& c : national_cycles) {
    check_nodes(c.nodes, n);
    if (c.international) throw InvariantError("mixed model received an international cycle as national");
    VarInfo info{VarKind::Cycle};
    info.item = model.add_cycle(c);
    const VarId x = model.add_variable(info);
    for (NodeId v : c.nodes) coverage[static_cast<std::size_t>(v)].push_back({x, 1.0});
  }

  // e+(i) / e-(i) for segment endpoints.
  std::map<NodeId, VarId> in_indicator;
  std::map<NodeId, VarId> out_indicator;
  auto indicator = [&](std::map<NodeId, VarId>& cache, NodeId v, VarKind kind) {
    auto it = cache.find(v);
    if (it != cache.end()) return it->second;
    VarInfo info{kind};
    info.source = v;
    const VarId e = model.add_variable(info);
    std::vector<Term> terms{{e, 1.0}};
    const auto arcs = kind == VarKind::InIndicator ? g.in_arcs(v) : g.out_arcs(v);
    for (int a : arcs) {
      if (!g.is_national(g.arc(a))) terms.push_back({*international[static_cast<std::size_t>(a)], -1.0});
    }
    model.add_constraint(std::move(terms), Relation::Equal, 0.0, tags::kIndicator);
    cache.emplace(v, e);
    return e;
  };

  struct SegmentVar {
    VarId z;
    const Segment* segment;
  };
  std::vector<SegmentVar> segment_vars;
  for (const Segment& s : segments) {
    check_nodes(s.nodes, n);
    VarInfo info{VarKind::Segment};
    info.item = model.add_segment(s);
    info.country = s.country;
    const VarId z = model.add_variable(info);
    for (NodeId v : s.nodes) coverage[static_cast<std::size_t>(v)].push_back({z, 1.0});
    segment_vars.push_back({z, &s});
  }

  // Coverage: out-degree <= cycles + segments through the node <= 1.
  for (NodeId v = 0; v < n; ++v) {
    std::vector<Term> out;
    for (int a : g.out_arcs(v)) {
      if (auto var = national[static_cast<std::size_t>(a)]) out.push_back({*var, 1.0});
      out.push_back({*international[static_cast<std::size_t>(a)], 1.0});
    }
    model.add_constraint(out, Relation::LessEqual, 1.0, tags::kOutDegree);
    for (const Term& t : coverage[static_cast<std::size_t>(v)]) out.push_back({t.var, -1.0});
    model.add_constraint(std::move(out), Relation::LessEqual, 0.0, tags::kCoverOut);
    model.add_constraint(coverage[static_cast<std::size_t>(v)], Relation::LessEqual, 1.0, tags::kCoverOnce);
  }

  // A selected national cycle uses exactly its own national arcs.
  {
    int var_index = 0;
    for (const VarInfo& info : model.variables()) {
      if (info.kind == VarKind::Cycle) {
        const Cycle& c = model.cycles()[static_cast<std::size_t>(info.item)];
        const double len = static_cast<double>(c.size());
        std::vector<Term> lower{{VarId{var_index}, len}};
        std::vector<Term> upper{{VarId{var_index}, -1.0}};
        for (std::size_t i = 0; i < c.size(); ++i) {
          const int a = *g.find_arc(c.nodes[i], c.nodes[(i + 1) % c.size()]);
          lower.push_back({*national[static_cast<std::size_t>(a)], -1.0});
          upper.push_back({*national[static_cast<std::size_t>(a)], 1.0});
        }
        model.add_constraint(std::move(lower), Relation::LessEqual, 0.0, tags::kCycleArcsLower);
        model.add_constraint(std::move(upper), Relation::LessEqual, len - 1.0, tags::kCycleArcsUpper);
      }
      ++var_index;
    }
  }

  // A selected segment uses its national arcs plus an international arc into
  // its head and out of its tail.
  for (const SegmentVar& sv : segment_vars) {
    const Segment& s = *sv.segment;
    const VarId ep = indicator(in_indicator, s.head(), VarKind::InIndicator);
    const VarId em = indicator(out_indicator, s.tail(), VarKind::OutIndicator);
    const double arcs = s.arc_count();
    std::vector<Term> lower{{sv.z, arcs + 2.0}, {ep, -1.0}, {em, -1.0}};
    std::vector<Term> upper{{sv.z, -1.0}, {ep, 1.0}, {em, 1.0}};
    for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i) {
      const int a = *g.find_arc(s.nodes[i], s.nodes[i + 1]);
      lower.push_back({*international[static_cast<std::size_t>(a)], -1.0});
      upper.push_back({*international[static_cast<std::size_t>(a)], 1.0});
    }
    model.add_constraint(std::move(lower), Relation::LessEqual, 0.0, tags::kSegmentArcsLower);
    model.add_constraint(std::move(upper), Relation::LessEqual, arcs + 1.0, tags::kSegmentArcsUpper);
  }

  add_conservation(model, g, national, tags::kNationalFlow);
  add_conservation(model, g, international, tags::kInternationalFlow);

  auto everywhere = [](NodeId) { return true; };
  if (policy.international_cycle_cap.finite()) {
    add_path_caps(model, g, international, policy.international_cycle_cap.value(), everywhere,
                  tags::kInternationalPathLength);
  }
  for (CountryId k = 1; k <= g.num_countries(); ++k) {
    auto in_country = [&g, k](NodeId v) { return g.country(v) == k; };
    const Cap national_cap = std::min(policy.country(k).national_cycle_cap, policy.international_cycle_cap);
    if (national_cap.finite()) {
      add_path_caps(model, g, national, national_cap.value(), in_country, tags::kNationalPathLength);
    }
    const Cap seg = policy.country(k).segment_node_cap;
    if (seg.finite()) add_path_caps(model, g, international, seg.value(), in_country, tags::kSegmentPathLength);
  }

  if (layer_caps_can_bind(g, policy)) add_layer_constraints(model, g, layers.value_or(std::max(1, n / 2)), policy);
  return model;
}

void add_layer_constraints(IpModel& model, const CompatibilityGraph& g, int layers, const PolicyConfig& policy) {
  if (layers <= 0) throw ConfigError("layer count must be positive");
  // Arc -> international arc variable already in the model.
  std::vector<std::optional<VarId>> international(static_cast<std::size_t>(g.num_arcs()));
  for (int i = 0; i < model.num_variables(); ++i) {
    const VarInfo& info = model.variable(VarId{i});
    if (info.kind == VarKind::InternationalEdge) {
      international[static_cast<std::size_t>(*g.find_arc(info.source, info.target))] = VarId{i};
    }
  }
  std::vector<std::vector<std::optional<VarId>>> layer_vars(static_cast<std::size_t>(layers));
  for (int t = 0; t < layers; ++t) {
    auto& lv = layer_vars[static_cast<std::size_t>(t)];
    lv.resize(static_cast<std::size_t>(g.num_arcs()));
    for (int a = 0; a < g.num_arcs(); ++a) {
      if (!international[static_cast<std::size_t>(a)]) continue;
      VarInfo info{VarKind::LayerEdge};
      info.source = g.arc(a).source;
      info.target = g.arc(a).target;
      info.layer = t + 1;
      lv[static_cast<std::size_t>(a)] = model.add_variable(info);
    }
  }
  for (int a = 0; a < g.num_arcs(); ++a) {
    if (!international[static_cast<std::size_t>(a)]) continue;
    std::vector<Term> terms{{*international[static_cast<std::size_t>(a)], -1.0}};
    for (const auto& lv : layer_vars) terms.push_back({*lv[static_cast<std::size_t>(a)], 1.0});
    model.add_constraint(std::move(terms), Relation::Equal, 0.0, tags::kLayerSum);
  }
  for (const auto& lv : layer_vars) add_conservation(model, g, lv, tags::kLayerFlow);

  const Cap gamma = policy.max_countries_per_cycle;
  for (int t = 0; t < layers; ++t) {
    const auto& lv = layer_vars[static_cast<std::size_t>(t)];
    std::vector<Term> countries_in_layer;
    for (CountryId k = 1; k <= g.num_countries(); ++k) {
      const CountryPolicy& cp = policy.country(k);
      std::vector<Term> entering;  // international arcs into k
      std::vector<Term> received;  // all arcs into k
      for (int a : g.arcs_into_country(k)) {
        const auto var = lv[static_cast<std::size_t>(a)];
        if (!var) continue;
        received.push_back({*var, 1.0});
        if (!g.is_national(g.arc(a))) entering.push_back({*var, 1.0});
      }
      if (cp.max_segments_per_cycle.finite()) {
        model.add_constraint(entering, Relation::LessEqual, cp.max_segments_per_cycle.value(), tags::kCountrySegments);
      }
      if (cp.max_pairs_per_cycle.finite()) {
        model.add_constraint(received, Relation::LessEqual, cp.max_pairs_per_cycle.value(), tags::kCountryPairs);
      }
      if (gamma.finite()) {
        VarInfo info{VarKind::CountryLayer};
        info.country = k;
        info.layer = t + 1;
        const VarId b = model.add_variable(info);
        const double big_m = static_cast<double>(g.country_nodes(k).size());
        entering.push_back({b, -big_m});
        model.add_constraint(std::move(entering), Relation::LessEqual, 0.0, tags::kCountryNumber);
        countries_in_layer.push_back({b, 1.0});
      }
    }
    if (gamma.finite()) {
      model.add_constraint(std::move(countries_in_layer), Relation::LessEqual, gamma.value(),
                           tags::kCountryNumberBound);
    }
  }
}

IpModel build_bounded_unbounded_model(const CompatibilityGraph& g, std::span<const Cycle> bounded_cycles,
                                      std::span<const Segment> bounded_segments, CountryId bounded_country) {
  if (g.num_countries() != 2) throw ConfigError("the bounded/unbounded model needs exactly two countries");
  if (bounded_country != 1 && bounded_country != 2) throw ConfigError("bounded country must be 1 or 2");
  const int n = g.num_nodes();
  auto bounded = [&](NodeId v) { return g.country(v) == bounded_country; };
  IpModel model;

  std::vector<std::vector<Term>> coverage(static_cast<std::size_t>(n));
  for (const Cycle& c : bounded_cycles) {
    check_nodes(c.nodes, n);
    for (NodeId v : c.nodes) {
      if (!bounded(v)) throw InvariantError("bounded-country cycle leaves its country");
    }
    VarInfo info{VarKind::Cycle};
    info.item = model.add_cycle(c);
    const VarId x = model.add_variable(info, c.weight);
    for (NodeId v : c.nodes) coverage[static_cast<std::size_t>(v)].push_back({x, 1.0});
  }
  std::vector<std::pair<VarId, const Segment*>> segment_vars;
  std::vector<std::vector<Term>> starts(static_cast<std::size_t>(n));
  std::vector<std::vector<Term>> ends(static_cast<std::size_t>(n));
  for (const Segment& s : bounded_segments) {
    check_nodes(s.nodes, n);
    if (s.country != bounded_country) throw InvariantError("segment outside the bounded country");
    VarInfo info{VarKind::Segment};
    info.item = model.add_segment(s);
    info.country = s.country;
    const VarId z = model.add_variable(info, s.weight);
    for (NodeId v : s.nodes) coverage[static_cast<std::size_t>(v)].push_back({z, 1.0});
    starts[static_cast<std::size_t>(s.head())].push_back({z, -1.0});
    ends[static_cast<std::size_t>(s.tail())].push_back({z, -1.0});
    segment_vars.emplace_back(z, &s);
  }

  const auto y = add_arc_vars(
      model, g, VarKind::Edge, [&](const Arc& a) { return !(bounded(a.source) && bounded(a.target)); }, true);

  // Layer owner: the t-th bounded node (ascending id) with an arc into the
  // other country owns layer t. Layer 0 hosts national cycles of the other
  // country only.
  std::vector<int> owner_layer(static_cast<std::size_t>(n), -1);
  int layers = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (!bounded(v)) continue;
    const auto outs = g.out_arcs(v);
    if (std::any_of(outs.begin(), outs.end(), [&](int a) { return !bounded(g.arc(a).target); })) {
      owner_layer[static_cast<std::size_t>(v)] = ++layers;
    }
  }
  std::vector<std::vector<std::optional<VarId>>> layer_vars(static_cast<std::size_t>(layers + 1));
  for (auto& lv : layer_vars) lv.resize(static_cast<std::size_t>(g.num_arcs()));
  for (int a = 0; a < g.num_arcs(); ++a) {
    if (!y[static_cast<std::size_t>(a)]) continue;
    const Arc& arc = g.arc(a);
    auto add_layer = [&](int t) {
      VarInfo info{VarKind::LayerEdge};
      info.source = arc.source;
      info.target = arc.target;
      info.layer = t;
      layer_vars[static_cast<std::size_t>(t)][static_cast<std::size_t>(a)] = model.add_variable(info);
    };
    if (bounded(arc.source)) {
      add_layer(owner_layer[static_cast<std::size_t>(arc.source)]);
    } else if (bounded(arc.target)) {
      for (int t = 1; t <= layers; ++t) add_layer(t);
    } else {
      for (int t = 0; t <= layers; ++t) add_layer(t);
    }
  }

  // (a) arc variable = sum of its layer copies.
  for (int a = 0; a < g.num_arcs(); ++a) {
    if (!y[static_cast<std::size_t>(a)]) continue;
    std::vector<Term> terms{{*y[static_cast<std::size_t>(a)], -1.0}};
    for (const auto& lv : layer_vars) {
      if (auto var = lv[static_cast<std::size_t>(a)]) terms.push_back({*var, 1.0});
    }
    model.add_constraint(std::move(terms), Relation::Equal, 0.0, tags::kLayerSum);
  }
  // (b) per-layer conservation at nodes of the unbounded country; bounded
  // nodes are passed through by their segments instead.
  for (const auto& lv : layer_vars) {
    for (NodeId v = 0; v < n; ++v) {
      if (bounded(v)) continue;
      std::vector<Term> terms;
      for (int a : g.in_arcs(v)) {
        if (auto var = lv[static_cast<std::size_t>(a)]) terms.push_back({*var, 1.0});
      }
      for (int a : g.out_arcs(v)) {
        if (auto var = lv[static_cast<std::size_t>(a)]) terms.push_back({*var, -1.0});
      }
      model.add_constraint(std::move(terms), Relation::Equal, 0.0, tags::kLayerFlow);
    }
  }
  // (c) out-degree.
  for (NodeId v = 0; v < n; ++v) {
    std::vector<Term> terms;
    for (int a : g.out_arcs(v)) {
      if (auto var = y[static_cast<std::size_t>(a)]) terms.push_back({*var, 1.0});
    }
    model.add_constraint(std::move(terms), Relation::LessEqual, 1.0, tags::kOutDegree);
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!bounded(v)) continue;
    // (d) one cycle or segment per bounded node.
    model.add_constraint(coverage[static_cast<std::size_t>(v)], Relation::LessEqual, 1.0, tags::kCoverOnce);
    // (e) arcs in from the other country = segments starting here.
    std::vector<Term> in_terms = starts[static_cast<std::size_t>(v)];
    for (int a : g.in_arcs(v)) {
      if (auto var = y[static_cast<std::size_t>(a)]) in_terms.push_back({*var, 1.0});
    }
    model.add_constraint(std::move(in_terms), Relation::Equal, 0.0, tags::kSegmentStart);
    // (f) arcs out to the other country = segments ending here.
    std::vector<Term> out_terms = ends[static_cast<std::size_t>(v)];
    for (int a : g.out_arcs(v)) {
      if (auto var = y[static_cast<std::size_t>(a)]) out_terms.push_back({*var, 1.0});
    }
    model.add_constraint(std::move(out_terms), Relation::Equal, 0.0, tags::kSegmentEnd);
  }
  // (g) a segment (i..j) enters and leaves in the layer owned by j.
  for (const auto& [z, s] : segment_vars) {
    std::vector<Term> terms{{z, -2.0}};
    const int t = owner_layer[static_cast<std::size_t>(s->tail())];
    if (t > 0) {
      const auto& lv = layer_vars[static_cast<std::size_t>(t)];
      for (int a : g.in_arcs(s->head())) {
        if (auto var = lv[static_cast<std::size_t>(a)]) terms.push_back({*var, 1.0});
      }
      for (int a : g.out_arcs(s->tail())) {
        if (auto var = lv[static_cast<std::size_t>(a)]) terms.push_back({*var, 1.0});
      }
    }
    model.add_constraint(std::move(terms), Relation::GreaterEqual, 0.0, tags::kSegmentLayer);
  }
  return model;
}

}  // namespace kep

namespace kep {

IpModel build_mixed_model(const CompatibilityGraph& g, const PolicyConfig& policy, std::optional<int> layers) {
  PolicyConfig clipped = policy;
  const Cap K = policy.international_cycle_cap;
  for (CountryPolicy& cp : clipped.countries) {
    if (K.finite()) cp.segment_node_cap = std::min(cp.segment_node_cap, Cap(K.value() - 1));
  }
  return build_mixed_model(g, enumerate_national_cycles(g, policy), enumerate_segments(g, clipped), policy, layers);
}

IpModel build_bounded_unbounded_model(const CompatibilityGraph& g, const PolicyConfig& policy) {
  if (g.num_countries() != 2 || policy.num_countries() != 2) {
    throw ConfigError("the bounded/unbounded model needs exactly two countries");
  }
  const bool first = policy.country(1).national_cycle_cap.finite();
  const bool second = policy.country(2).national_cycle_cap.finite();
  if (first == second) {
    throw ConfigError("the bounded/unbounded model needs one bounded and one unbounded country (use the cycle or "
                      "mixed model otherwise)");
  }
  const CountryId bounded = first ? 1 : 2;
  if (!policy.country(bounded).segment_node_cap.finite()) {
    throw ConfigError("the bounded country needs a finite segment cap");
  }
  return build_bounded_unbounded_model(g, enumerate_national_cycles(g, policy, bounded),
                                       enumerate_segments(g, policy, bounded), bounded);
}

}  // namespace kep
