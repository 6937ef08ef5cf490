#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kep/graph.hpp"

namespace kep {

/// One component of the patient PRA mixture: with `probability` a patient
/// gets panel-reactive antibody level `pra`.
struct PraLevel {
  double pra = 0.0;
  double probability = 1.0;
};

/// Parameters of the random pool generator. Frequencies are indexed by
/// BloodGroup (O, A, B, AB). The defaults are the usual US population figures
/// and low/medium/high PRA mixture; none of them is load-bearing.
struct InstanceSpec {
  std::vector<int> pairs_per_country{50, 50};
  std::vector<int> altruists_per_country;  // empty means none
  std::array<double, 4> donor_blood{0.4814, 0.3373, 0.1428, 0.0385};
  std::array<double, 4> patient_blood{0.4814, 0.3373, 0.1428, 0.0385};
  std::vector<PraLevel> pra_levels{{0.05, 0.7019}, {0.45, 0.2}, {0.9, 0.0981}};
  // Redraw pairs whose donor could give to their own patient.
  bool incompatible_pairs_only = false;
  std::uint64_t seed = 1;

  int num_countries() const { return static_cast<int>(pairs_per_country.size()); }
  /// Throws ConfigError when counts are negative or a table does not sum to 1.
  void validate() const;
};

/// Deterministic in `spec.seed`. Arc (i,j) exists iff donor i is ABO-compatible
/// with patient j and a crossmatch draw with success probability 1 - pra_j
/// succeeds. Altruists get no incoming arcs; every weight is 1.
CompatibilityGraph sample_instance(const InstanceSpec& spec);

/// Gives every altruist an artificial patient that accepts all pair donors:
/// adds a zero-weight arc (v, a) from each patient-donor pair v. A chain
/// a -> p1 -> ... -> pk becomes the cycle a -> p1 -> ... -> pk -> a. Idempotent.
CompatibilityGraph reduce_chains_to_cycles(const CompatibilityGraph& g);

/// Key=value generator description (see README). Throws ParseError.
InstanceSpec parse_instance_spec(std::string_view text);

/// Line-oriented instance format:
///   kep <num_nodes> <num_countries>
///   node <id> <country> <kind> <donor_blood> [<patient_blood> <pra>]
///   arc <src> <dst> <weight>
/// Blank lines and '#' comments are ignored.
void write_instance(std::ostream& out, const CompatibilityGraph& g);
std::string format_instance(const CompatibilityGraph& g);
/// Throws ParseError with the offending line number.
CompatibilityGraph parse_instance(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace kep
