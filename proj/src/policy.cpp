#include "kep/policy.hpp"

#include <algorithm>
#include <string>

namespace kep {

PolicyConfig PolicyConfig::uniform(int num_countries, Cap cycle_cap) {
  PolicyConfig p;
  p.countries.assign(static_cast<std::size_t>(num_countries), CountryPolicy{cycle_cap, Cap::unbounded(),
                                                                            Cap::unbounded(), Cap::unbounded()});
  p.international_cycle_cap = cycle_cap;
  p.chain_cap = cycle_cap.finite() ? Cap(cycle_cap.value() - 1) : Cap::unbounded();
  p.validate();
  return p;
}

PolicyConfig PolicyConfig::merged_pool(std::span<const Cap> national_bounds) {
  if (national_bounds.empty()) throw ConfigError("merged pool needs at least one country");
  PolicyConfig p;
  const bool any_unbounded =
      std::any_of(national_bounds.begin(), national_bounds.end(), [](Cap c) { return !c.finite(); });
  Cap largest{0};
  for (Cap bound : national_bounds) {
    largest = std::max(largest, bound);
    CountryPolicy cp;
    cp.national_cycle_cap = bound;
    cp.segment_node_cap = bound.finite() ? Cap(bound.value() - 1) : Cap::unbounded();
    cp.max_segments_per_cycle = any_unbounded ? Cap(1) : Cap::unbounded();
    p.countries.push_back(cp);
  }
  p.international_cycle_cap = largest;
  p.chain_cap = largest.finite() ? Cap(largest.value() - 1) : Cap::unbounded();
  p.validate();
  return p;
}

bool PolicyConfig::has_uniform_caps() const {
  if (max_countries_per_cycle.finite() && max_countries_per_cycle.value() < num_countries()) return false;
  return std::all_of(countries.begin(), countries.end(), [&](const CountryPolicy& c) {
    return c.national_cycle_cap == international_cycle_cap && !c.segment_node_cap.finite() &&
           !c.max_segments_per_cycle.finite() && !c.max_pairs_per_cycle.finite();
  });
}

bool PolicyConfig::any_unbounded_country() const {
  return std::any_of(countries.begin(), countries.end(),
                     [](const CountryPolicy& c) { return !c.national_cycle_cap.finite(); });
}

void PolicyConfig::validate() const {
  if (countries.empty()) throw ConfigError("policy lists no countries");
  auto at_least = [](Cap c, int min, const std::string& what) {
    if (c.finite() && c.value() < min) {
      throw ConfigError(what + " must be at least " + std::to_string(min) + " (got " + c.to_string() + ")");
    }
  };
  at_least(international_cycle_cap, 2, "international cycle cap");
  at_least(max_countries_per_cycle, 1, "country count cap");
  at_least(chain_cap, 1, "chain cap");
  for (int k = 1; k <= num_countries(); ++k) {
    const CountryPolicy& c = country(k);
    const std::string who = "country " + std::to_string(k) + " ";
    at_least(c.national_cycle_cap, 2, who + "cycle cap");
    at_least(c.segment_node_cap, 1, who + "segment cap");
    at_least(c.max_segments_per_cycle, 1, who + "segment count cap");
    at_least(c.max_pairs_per_cycle, 1, who + "pair count cap");
  }
}

}  // namespace kep
