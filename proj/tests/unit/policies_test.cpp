#include "doctest.h"
#include "kep/instance.hpp"
#include "kep/policies.hpp"
#include "oracles.hpp"

using namespace kep;

namespace {

PolicyConfig merged(Cap a, Cap b) { return PolicyConfig::merged_pool(std::vector<Cap>{a, b}); }

// Brute-force merged optimum: every simple cycle, filtered by the merged
// rules, packed by the subset oracle.
int oracle_merged(const CompatibilityGraph& g, const PolicyConfig& p) {
  std::vector<oracle::NodeList> valid;
  for (const auto& c : oracle::simple_cycles(g)) {
    PolicyConfig q = p;
    if (!q.international_cycle_cap.finite()) q.international_cycle_cap = Cap(g.num_nodes());
    if (oracle::valid_cycle(g, c, q)) valid.push_back(c);
  }
  return static_cast<int>(oracle::max_packing(g.num_nodes(), valid));
}

}  // namespace

TEST_CASE("no cooperation") {
  SUBCASE("only international arcs") {
    const auto g = oracle::graph({1, 2}, {{0, 1}, {1, 0}});
    CHECK(run_no_cooperation(g, merged(Cap(3), Cap(3))).total() == 0);
  }
  SUBCASE("one 2-cycle per country") {
    const auto g = oracle::graph({1, 1, 2, 2}, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {1, 2}});
    const auto out = run_no_cooperation(g, merged(Cap(2), Cap(2)));
    CHECK(out.per_country == std::vector<int>{2, 2});
  }
  SUBCASE("unbounded country with a 5-cycle") {
    const auto g = oracle::graph({1, 2, 2, 2, 2, 2}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
    const auto out = run_no_cooperation(g, merged(Cap(3), Cap::unbounded()));
    CHECK(out.per_country == std::vector<int>{0, 5});
  }
}

TEST_CASE("consecutive") {
  SUBCASE("no international arcs: same as no cooperation") {
    const auto g = oracle::graph({1, 1, 1, 2, 2}, {{0, 1}, {1, 2}, {2, 0}, {1, 0}, {3, 4}, {4, 3}});
    const auto p = merged(Cap(3), Cap(3));
    CHECK(run_consecutive(g, p).plan.covered_nodes() == run_no_cooperation(g, p).plan.covered_nodes());
  }
  SUBCASE("the lone foreign pair stays unmatched") {
    const auto g = oracle::graph({1, 1, 2}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
    const auto out = run_consecutive(g, merged(Cap(3), Cap(3)));
    CHECK(out.per_country == std::vector<int>{2, 0});
    CHECK(run_merged(g, merged(Cap(3), Cap(3))).total() == 2);
  }
  SUBCASE("national greed destroys an international 4-cycle") {
    const auto g = oracle::graph({1, 1, 2, 2}, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 0}});
    const auto p = merged(Cap(4), Cap(4));
    CHECK(run_consecutive(g, p).total() == 2);
    CHECK(run_merged(g, p).total() == 4);
    CHECK(oracle_merged(g, p) == 4);
  }
}

TEST_CASE("merged") {
  SUBCASE("bounds (3,2) reject two C2 pairs in a row") {
    const auto g = oracle::graph({1, 2, 2}, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(run_merged(g, merged(Cap(3), Cap(2))).total() == 0);
    CHECK(run_merged(g, merged(Cap(3), Cap(3))).total() == 3);
  }
  SUBCASE("bounds (3,inf) use the bounded/unbounded model and match brute force") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 25; ++trial) {
      const auto g = oracle::random_graph(rng, 6, 0.45, 2);
      const auto p = merged(Cap(3), Cap::unbounded());
      CHECK(build_pool_model(g, p, ModelChoice::Auto).count_tag(tags::kSegmentLayer) ==
            static_cast<int>(build_pool_model(g, p, ModelChoice::BoundedUnbounded).segments().size()));
      CHECK(run_merged(g, p).total() == oracle_merged(g, p));
    }
  }
  SUBCASE("both countries unbounded is not supported") {
    const auto g = oracle::graph({1, 2}, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(run_merged(g, merged(Cap::unbounded(), Cap::unbounded())), ConfigError);
  }
  SUBCASE("explicit model choices") {
    const auto g = oracle::graph({1, 2, 2}, {{0, 1}, {1, 2}, {2, 0}, {1, 0}});
    RegimeOptions opt;
    opt.model = ModelChoice::Edge;
    CHECK_THROWS_AS(run_merged(g, merged(Cap(3), Cap(2)), opt), ConfigError);
    CHECK(run_merged(g, PolicyConfig::uniform(2, Cap(3)), opt).total() == 3);
    opt.model = ModelChoice::Mixed;
    CHECK(run_merged(g, merged(Cap(3), Cap(2)), opt).total() == 2);
  }
}

TEST_CASE("regimes are ordered and their plans respect the policy") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_graph(rng, 10, 0.25, 2);
    std::uniform_int_distribution<int> bound(2, 4);
    const auto p = merged(Cap(bound(rng)), Cap(bound(rng)));
    const auto local = run_no_cooperation(g, p);
    const auto seq = run_consecutive(g, p);
    const auto all = run_merged(g, p);
    CHECK(all.total() >= seq.total());
    CHECK(seq.total() >= local.total());
    CHECK(all.total() == oracle_merged(g, p));
    for (const auto* o : {&local, &seq, &all}) CHECK(validate_plan(o->plan, g, p).empty());
    for (const Cycle& c : local.plan.cycles) CHECK_FALSE(c.international);
  }
}

TEST_CASE("chains run through the reduction") {
  CompatibilityGraph g(1);
  g.add_node(1, NodeKind::AltruisticDonor, BloodGroup::O);
  g.add_node(1, NodeKind::PatientDonorPair, BloodGroup::A, BloodGroup::O, 0.0);
  g.add_node(1, NodeKind::PatientDonorPair, BloodGroup::A, BloodGroup::A, 0.0);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  PolicyConfig p = PolicyConfig::uniform(1, Cap(3));
  CHECK(run_merged(g, p).total() == 0);
  p.chains_enabled = true;
  const auto out = run_merged(g, p);
  CHECK(out.total() == 2);
  REQUIRE(out.plan.chains.size() == 1);
  CHECK(out.plan.chains[0].nodes == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("two altruists never share a cycle") {
  CompatibilityGraph g(1);
  g.add_node(1, NodeKind::AltruisticDonor, BloodGroup::O);
  g.add_node(1, NodeKind::PatientDonorPair, BloodGroup::A, BloodGroup::O, 0.0);
  g.add_node(1, NodeKind::AltruisticDonor, BloodGroup::O);
  g.add_node(1, NodeKind::PatientDonorPair, BloodGroup::A, BloodGroup::O, 0.0);
  g.add_arc(0, 1);
  g.add_arc(2, 3);
  PolicyConfig p = PolicyConfig::uniform(1, Cap(4));
  p.chains_enabled = true;
  p.chain_cap = Cap(3);
  const auto r = reduce_chains_to_cycles(g);
  for (const Cycle& c : enumerate_cycles(r, p)) CHECK(c.artificial_nodes == 1);
  const auto out = run_merged(g, p);
  CHECK(out.total() == 2);
  CHECK(out.plan.chains.size() == 2);
  CHECK_THROWS_AS(build_pool_model(r, p, ModelChoice::Mixed), ConfigError);
}

TEST_CASE("benefit metrics") {
  const std::vector<std::vector<double>> totals{{13, 28, 0}, {14, 30, 1}, {15, 32, 2}};
  const auto b = benefit_metrics(totals);
  CHECK(*b[0].merged_over_local == doctest::Approx(15.0 / 13.0));
  CHECK(*b[0].merged_over_local == doctest::Approx(1.1538).epsilon(1e-4));
  CHECK(*b[1].merged_over_local == doctest::Approx(1.1429).epsilon(1e-4));
  CHECK_FALSE(b[2].merged_over_local.has_value());
  CHECK_FALSE(b[2].seq_over_local.has_value());
  const std::vector<std::optional<double>> values{1.0, std::nullopt, 2.0};
  CHECK(*mean_defined(values) == 1.5);
  CHECK_FALSE(mean_defined(std::vector<std::optional<double>>{std::nullopt}).has_value());
}

TEST_CASE("regime and model names") {
  CHECK(parse_regime("seq") == Regime::Consecutive);
  CHECK_FALSE(parse_regime("global").has_value());
  CHECK(parse_model_choice("atcz") == ModelChoice::BoundedUnbounded);
  CHECK(to_string(Regime::NoCooperation) == "local");
}
