#include "doctest.h"
#include "kep/enumeration.hpp"
#include "kep/formulations.hpp"
#include "kep/instance.hpp"
#include "kep/plan.hpp"
#include "kep/solver.hpp"
#include "oracles.hpp"

using namespace kep;

TEST_CASE("decode a selected cycle variable") {
  const auto g = oracle::graph({1, 2}, {{0, 1}, {1, 0}});
  const auto m = build_cycle_model(enumerate_cycles(g, PolicyConfig::uniform(2, Cap(2))), 2);
  const auto plan = decode(m, solve(m).assignment, g);
  REQUIRE(plan.cycles.size() == 1);
  CHECK(plan.per_country == std::vector<int>{1, 1});
  CHECK(plan.total_transplants() == 2);
}

TEST_CASE("decode the bounded/unbounded example") {
  const auto g = oracle::graph({1, 1, 2}, {{0, 1}, {1, 2}, {2, 0}});
  const auto m = build_bounded_unbounded_model(g, PolicyConfig::merged_pool(std::vector<Cap>{Cap(3), Cap::unbounded()}));
  const auto plan = decode(m, *solve_exhaustive(m), g);
  REQUIRE(plan.cycles.size() == 1);
  CHECK(plan.cycles[0].nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(plan.cycles[0].international);
  CHECK(plan.per_country == std::vector<int>{2, 1});
}

TEST_CASE("decode a reduced chain") {
  CompatibilityGraph g(1);
  g.add_node(1, NodeKind::AltruisticDonor, BloodGroup::O);
  g.add_node(1, NodeKind::PatientDonorPair, BloodGroup::A, BloodGroup::O, 0.0);
  g.add_arc(0, 1);
  const auto r = reduce_chains_to_cycles(g);
  PolicyConfig p = PolicyConfig::uniform(1, Cap(3));
  p.chains_enabled = true;
  const auto m = build_cycle_model(enumerate_cycles(r, p), r.num_nodes());
  const auto plan = decode(m, solve(m).assignment, r);
  CHECK(plan.cycles.empty());
  REQUIRE(plan.chains.size() == 1);
  CHECK(plan.chains[0].nodes == std::vector<NodeId>{0, 1});
  CHECK(plan.total_transplants() == 1);
}

TEST_CASE("decode rejects arcs that do not close") {
  const auto g = oracle::graph({1, 1, 1}, {{0, 1}, {1, 2}, {2, 0}});
  const auto m = build_circulation_model(g);
  Assignment a;
  a.values = {1, 1, 0};
  CHECK_THROWS_AS(decode(m, a, g), InvariantError);
}

TEST_CASE("decoded edge solutions cover exactly the objective") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_graph(rng, 10, 0.3, 2);
    const auto m = build_edge_model(g, Cap(3));
    const auto r = solve(m);
    const auto plan = decode(m, r.assignment, g);
    CHECK(plan.total_transplants() == static_cast<int>(r.assignment.objective));
    CHECK(validate_plan(plan, g, PolicyConfig::uniform(2, Cap(3))).empty());
  }
}

TEST_CASE("plans lift from subgraphs and merge") {
  const auto g = oracle::graph({1, 1, 2, 2}, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
  std::vector<ExchangePlan> parts;
  for (CountryId k : {1, 2}) {
    const auto sub = country_subgraph(g, k);
    const auto m = build_cycle_model(enumerate_cycles(sub.graph, PolicyConfig::uniform(2, Cap(2))), sub.graph.num_nodes());
    parts.push_back(lift_plan(decode(m, solve(m).assignment, sub.graph), sub.origin, g));
  }
  const auto merged = merge_plans(g, parts);
  CHECK(merged.per_country == std::vector<int>{2, 2});
  CHECK(merged.covered_nodes() == std::vector<NodeId>{0, 1, 2, 3});
  CHECK_THROWS_AS(merge_plans(g, std::vector<ExchangePlan>{parts[0], parts[0]}), InvariantError);
}
