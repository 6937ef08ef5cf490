#pragma once

#include <span>
#include <vector>

#include "kep/types.hpp"

namespace kep {

/// Restrictions one country imposes. Segment caps count nodes: an l-segment
/// is a national path of l nodes and l-1 arcs.
struct CountryPolicy {
  Cap national_cycle_cap{3};                  // K^k
  Cap segment_node_cap = Cap::unbounded();    // L^k
  Cap max_segments_per_cycle = Cap::unbounded();  // lambda^k
  Cap max_pairs_per_cycle = Cap::unbounded();     // beta^k
};

struct PolicyConfig {
  std::vector<CountryPolicy> countries;  // index k-1
  Cap international_cycle_cap{3};        // K
  Cap max_countries_per_cycle = Cap::unbounded();  // gamma
  bool chains_enabled = false;
  // Transplants per altruistic chain.
  Cap chain_cap{3};

  int num_countries() const { return static_cast<int>(countries.size()); }
  const CountryPolicy& country(CountryId k) const { return countries.at(static_cast<std::size_t>(k - 1)); }
  CountryPolicy& country(CountryId k) { return countries.at(static_cast<std::size_t>(k - 1)); }

  /// Same cycle cap everywhere, no segment or country restrictions.
  static PolicyConfig uniform(int num_countries, Cap cycle_cap);

  /// The merged-pool rules for per-country national bounds:
  /// international cap = the largest bound, segment cap = own bound - 1 nodes,
  /// segment count unrestricted unless some country is unbounded, in which
  /// case each country contributes one segment per international cycle.
  static PolicyConfig merged_pool(std::span<const Cap> national_bounds);

  /// No country restricts segments, pair counts or country counts.
  bool has_uniform_caps() const;
  bool any_unbounded_country() const;

  /// Throws ConfigError on caps below their minimum (cycles >= 2, others >= 1).
  void validate() const;
};

}  // namespace kep
