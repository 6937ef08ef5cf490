#include "kep/instance.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "text_util.hpp"

namespace kep {
namespace {

constexpr std::array<BloodGroup, 4> kGroups{BloodGroup::O, BloodGroup::A, BloodGroup::B, BloodGroup::AB};

void check_distribution(std::span<const double> p, const char* name) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw ConfigError(std::string(name) + ": negative frequency");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError(std::string(name) + ": frequencies sum to " + format_number(sum) + ", expected 1");
  }
}

template <typename Rng>
std::size_t draw_index(Rng& rng, std::span<const double> p) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  // Rounding slack: fall back to the last category with positive mass.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return i;
  }
  return 0;
}

}  // namespace

void InstanceSpec::validate() const {
  if (pairs_per_country.empty()) throw ConfigError("instance spec needs at least one country");
  for (int c : pairs_per_country) {
    if (c < 0) throw ConfigError("negative pair count");
  }
  if (!altruists_per_country.empty() && altruists_per_country.size() != pairs_per_country.size()) {
    throw ConfigError("altruist counts must list one entry per country");
  }
  for (int c : altruists_per_country) {
    if (c < 0) throw ConfigError("negative altruist count");
  }
  check_distribution(donor_blood, "donor blood");
  check_distribution(patient_blood, "patient blood");
  if (pra_levels.empty()) throw ConfigError("PRA distribution is empty");
  std::vector<double> mass;
  for (const PraLevel& level : pra_levels) {
    if (level.pra < 0.0 || level.pra > 1.0) throw ConfigError("PRA level outside [0,1]");
    mass.push_back(level.probability);
  }
  check_distribution(mass, "PRA distribution");
}

CompatibilityGraph sample_instance(const InstanceSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<double> pra_mass;
  for (const PraLevel& level : spec.pra_levels) pra_mass.push_back(level.probability);
  auto bernoulli = [&rng](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };

  CompatibilityGraph g(spec.num_countries());
  for (int k = 1; k <= spec.num_countries(); ++k) {
    for (int i = 0; i < spec.pairs_per_country[static_cast<std::size_t>(k - 1)]; ++i) {
      while (true) {
        const BloodGroup patient = kGroups[draw_index(rng, spec.patient_blood)];
        const BloodGroup donor = kGroups[draw_index(rng, spec.donor_blood)];
        const double pra = spec.pra_levels[draw_index(rng, pra_mass)].pra;
        const bool self_compatible = abo_compatible(donor, patient) && bernoulli(1.0 - pra);
        if (spec.incompatible_pairs_only && self_compatible) continue;
        g.add_node(k, NodeKind::PatientDonorPair, donor, patient, pra);
        break;
      }
    }
  }
  if (!spec.altruists_per_country.empty()) {
    for (int k = 1; k <= spec.num_countries(); ++k) {
      for (int i = 0; i < spec.altruists_per_country[static_cast<std::size_t>(k - 1)]; ++i) {
        g.add_node(k, NodeKind::AltruisticDonor, kGroups[draw_index(rng, spec.donor_blood)]);
      }
    }
  }
  const int n = g.num_nodes();
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      const Node& patient = g.node(j);
      if (!patient.has_patient()) continue;
      if (!abo_compatible(g.node(i).donor_blood, *patient.patient_blood)) continue;
      if (bernoulli(1.0 - *patient.patient_pra)) g.add_arc(i, j, 1.0);
    }
  }
  return g;
}

CompatibilityGraph reduce_chains_to_cycles(const CompatibilityGraph& g) {
  CompatibilityGraph out(g.num_countries());
  for (const Node& n : g.nodes()) {
    const NodeKind kind = n.kind == NodeKind::AltruisticDonor ? NodeKind::ArtificialPatient : n.kind;
    out.add_node(n.country, kind, n.donor_blood, n.patient_blood, n.patient_pra);
  }
  for (const Arc& a : g.arcs()) out.add_arc(a.source, a.target, a.weight);
  for (const Node& n : g.nodes()) {
    if (n.kind != NodeKind::AltruisticDonor) continue;
    for (const Node& v : g.nodes()) {
      if (v.kind == NodeKind::PatientDonorPair) out.add_arc(v.id, n.id, 0.0);
    }
  }
  return out;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_instance(std::ostream& out, const CompatibilityGraph& g) {
  out << "kep " << g.num_nodes() << ' ' << g.num_countries() << '\n';
  for (const Node& n : g.nodes()) {
    out << "node " << n.id << ' ' << n.country << ' ' << to_string(n.kind) << ' ' << to_string(n.donor_blood);
    if (n.has_patient()) out << ' ' << to_string(*n.patient_blood) << ' ' << format_number(*n.patient_pra);
    out << '\n';
  }
  for (const Arc& a : g.arcs()) {
    out << "arc " << a.source << ' ' << a.target << ' ' << format_number(a.weight) << '\n';
  }
}

std::string format_instance(const CompatibilityGraph& g) {
  std::ostringstream os;
  write_instance(os, g);
  return os.str();
}

CompatibilityGraph parse_instance(std::string_view text) {
  using namespace detail;
  std::optional<CompatibilityGraph> g;
  int declared_nodes = 0;
  std::size_t last_line = 0;
  struct PendingArc {
    std::size_t line;
    NodeId s, t;
    double w;
  };
  std::vector<PendingArc> arcs;

  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    last_line = line_no;
    const auto line = strip_comment(raw);
    if (line.empty()) return;
    const auto tok = split_ws(line);
    if (tok[0] == "kep") {
      if (g) throw ParseError(line_no, "duplicate header");
      if (tok.size() != 3) throw ParseError(line_no, "header must be 'kep <num_nodes> <num_countries>'");
      auto nodes = parse_int<int>(tok[1]);
      auto countries = parse_int<int>(tok[2]);
      if (!nodes || *nodes < 0 || !countries || *countries < 1) throw ParseError(line_no, "bad header counts");
      declared_nodes = *nodes;
      g.emplace(*countries);
      return;
    }
    if (!g) throw ParseError(line_no, "missing 'kep' header before '" + std::string(tok[0]) + "'");
    if (tok[0] == "node") {
      if (tok.size() != 5 && tok.size() != 7) {
        throw ParseError(line_no, "node line must be 'node <id> <country> <kind> <donor_blood> [<patient_blood> <pra>]'");
      }
      auto id = parse_int<int>(tok[1]);
      if (!id || *id != g->num_nodes()) {
        throw ParseError(line_no, "node ids must be dense and ascending (expected " + std::to_string(g->num_nodes()) + ")");
      }
      auto country = parse_int<int>(tok[2]);
      if (!country || *country < 1 || *country > g->num_countries()) throw ParseError(line_no, "bad country");
      auto kind = parse_node_kind(tok[3]);
      if (!kind) throw ParseError(line_no, "unknown node kind '" + std::string(tok[3]) + "'");
      auto donor = parse_blood_group(tok[4]);
      if (!donor) throw ParseError(line_no, "unknown blood group '" + std::string(tok[4]) + "'");
      std::optional<BloodGroup> patient;
      std::optional<double> pra;
      if (tok.size() == 7) {
        patient = parse_blood_group(tok[5]);
        if (!patient) throw ParseError(line_no, "unknown blood group '" + std::string(tok[5]) + "'");
        pra = parse_double(tok[6]);
        if (!pra || *pra < 0.0 || *pra > 1.0) throw ParseError(line_no, "PRA must be a number in [0,1]");
      }
      if ((*kind == NodeKind::PatientDonorPair) != patient.has_value()) {
        throw ParseError(line_no, *kind == NodeKind::PatientDonorPair ? "pair needs patient blood and PRA"
                                                                      : "donor-only node must not carry patient data");
      }
      g->add_node(*country, *kind, *donor, patient, pra);
      return;
    }
    if (tok[0] == "arc") {
      if (tok.size() != 4) throw ParseError(line_no, "arc line must be 'arc <src> <dst> <weight>'");
      auto s = parse_int<int>(tok[1]);
      auto t = parse_int<int>(tok[2]);
      auto w = parse_double(tok[3]);
      if (!s || !t) throw ParseError(line_no, "bad arc endpoint");
      if (!w || *w < 0.0) throw ParseError(line_no, "arc weight must be a non-negative number");
      arcs.push_back({line_no, *s, *t, *w});
      return;
    }
    throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
  });

  if (!g) throw ParseError(last_line == 0 ? 1 : last_line, "empty instance (no 'kep' header)");
  if (g->num_nodes() != declared_nodes) {
    throw ParseError(last_line, "header declares " + std::to_string(declared_nodes) + " nodes, found " +
                                    std::to_string(g->num_nodes()));
  }
  for (const PendingArc& a : arcs) {
    try {
      g->add_arc(a.s, a.t, a.w);
    } catch (const InvariantError& e) {
      throw ParseError(a.line, e.what());
    }
  }
  return std::move(*g);
}

InstanceSpec parse_instance_spec(std::string_view text) {
  using namespace detail;
  InstanceSpec spec;
  bool altruists_seen = false;
  auto parse_counts = [](std::size_t line_no, std::string_view value) {
    std::vector<int> out;
    for (auto part : split(value, ',')) {
      auto v = parse_int<int>(part);
      if (!v || *v < 0) throw ParseError(line_no, "expected a comma-separated list of non-negative integers");
      out.push_back(*v);
    }
    return out;
  };
  auto parse_blood_table = [](std::size_t line_no, std::string_view value) {
    std::array<double, 4> table{0, 0, 0, 0};
    for (auto part : split(value, ',')) {
      auto kv = split(part, ':');
      auto group = kv.size() == 2 ? parse_blood_group(kv[0]) : std::nullopt;
      auto p = kv.size() == 2 ? parse_double(kv[1]) : std::nullopt;
      if (!group || !p) throw ParseError(line_no, "expected entries like 'O:0.48,A:0.34'");
      table[static_cast<std::size_t>(*group)] = *p;
    }
    return table;
  };

  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const auto line = strip_comment(raw);
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "pairs") {
      spec.pairs_per_country = parse_counts(line_no, value);
    } else if (key == "altruists") {
      spec.altruists_per_country = parse_counts(line_no, value);
      altruists_seen = true;
    } else if (key == "blood") {
      spec.donor_blood = spec.patient_blood = parse_blood_table(line_no, value);
    } else if (key == "donor_blood") {
      spec.donor_blood = parse_blood_table(line_no, value);
    } else if (key == "patient_blood") {
      spec.patient_blood = parse_blood_table(line_no, value);
    } else if (key == "pra") {
      spec.pra_levels.clear();
      for (auto part : split(value, ',')) {
        auto kv = split(part, ':');
        auto level = kv.size() == 2 ? parse_double(kv[0]) : std::nullopt;
        auto p = kv.size() == 2 ? parse_double(kv[1]) : std::nullopt;
        if (!level || !p) throw ParseError(line_no, "expected entries like '0.05:0.7,0.45:0.2'");
        spec.pra_levels.push_back({*level, *p});
      }
    } else if (key == "incompatible_only") {
      if (value == "true" || value == "1") {
        spec.incompatible_pairs_only = true;
      } else if (value == "false" || value == "0") {
        spec.incompatible_pairs_only = false;
      } else {
        throw ParseError(line_no, "expected true or false");
      }
    } else if (key == "seed") {
      auto s = parse_int<std::uint64_t>(value);
      if (!s) throw ParseError(line_no, "seed must be a non-negative integer");
      spec.seed = *s;
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  });
  if (altruists_seen && spec.altruists_per_country.size() != spec.pairs_per_country.size()) {
    throw ConfigError("altruists must list one count per country");
  }
  return spec;
}

}  // namespace kep
