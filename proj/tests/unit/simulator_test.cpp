#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "kep/simulator.hpp"
#include "oracles.hpp"

using namespace kep;

namespace {

std::vector<PatientRecord> at_stage_one(const CompatibilityGraph& g, int stay = 4) {
  std::vector<PatientRecord> out;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out.push_back(PatientRecord{v, g.country(v), 1, 1 + stay, std::nullopt, std::nullopt});
  }
  return out;
}

SimulationConfig tiny() {
  SimulationConfig c;
  c.instances = 2;
  c.pairs_per_country = {12, 12};
  c.seed = 7;
  return c;
}

}  // namespace

TEST_CASE("pool ratio") {
  CHECK(PoolRatio::parse("1:2") == PoolRatio{1, 2});
  CHECK(PoolRatio::parse("2:3").to_string() == "2:3");
  CHECK_THROWS_AS(PoolRatio::parse("3:2"), ConfigError);
  CHECK_THROWS_AS(PoolRatio::parse("0:2"), ConfigError);
  CHECK_THROWS_AS(PoolRatio::parse("12"), ConfigError);
}

TEST_CASE("config validation") {
  SimulationConfig c = tiny();
  CHECK_NOTHROW(c.validate());
  c.bounds = {Cap(3)};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = tiny();
  c.regimes.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = tiny();
  c.bounds = {Cap::unbounded(), Cap::unbounded()};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(SimulationConfig{}.horizon_months() == 36);
}

TEST_CASE("four compatible pairs arriving together") {
  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (NodeId a = 0; a < 4; ++a)
    for (NodeId b = 0; b < 4; ++b)
      if (a != b) arcs.emplace_back(a, b);
  const auto g = oracle::graph({1, 1, 1, 1}, arcs, 1);
  SimulationConfig c = tiny();
  c.pairs_per_country = {4};
  c.bounds = {Cap(2)};
  c.pool_ratio = PoolRatio{};
  const RegimeRun run = simulate_regime(g, at_stage_one(g), c, Regime::NoCooperation, 0);
  int transplants = 0, dropouts = 0;
  for (const StageRow& r : run.stages) {
    transplants += r.transplants;
    dropouts += r.dropouts;
  }
  CHECK(transplants == 4);
  CHECK(dropouts == 0);
  CHECK(run.stages.front().transplants == 4);
  for (const auto& rec : run.records) CHECK(rec.matched_at == 1);
}

TEST_CASE("a pair with no arcs drops out after its last run") {
  const auto g = oracle::graph({1}, {}, 1);
  SimulationConfig c = tiny();
  c.pairs_per_country = {1};
  c.bounds = {Cap(3)};
  const RegimeRun run = simulate_regime(g, at_stage_one(g), c, Regime::NoCooperation, 0);
  REQUIRE(run.records.size() == 1);
  CHECK(!run.records[0].matched_at);
  CHECK(run.records[0].dropped_at == 4);
  for (const StageRow& r : run.stages) {
    CHECK(r.pool == (r.stage <= 4 ? 1 : 0));
    CHECK(r.dropouts == (r.stage == 4 ? 1 : 0));
  }
}

TEST_CASE("single node, single stage") {
  const auto g = oracle::graph({1}, {}, 1);
  SimulationConfig c = tiny();
  c.num_stages = 1;
  c.pairs_per_country = {1};
  c.bounds = {Cap(3)};
  const auto records = schedule_arrivals(g, c, 0);
  REQUIRE(records.size() == 1);
  CHECK(records[0].arrival_stage == 1);
}

TEST_CASE("arrivals are uniform, deterministic and nested under thinning") {
  SimulationConfig c = tiny();
  c.pairs_per_country = {60, 60};
  const auto g = simulation_instance(c, 3);
  const auto full = schedule_arrivals(g, c, 3);
  CHECK(full.size() == 120);
  CHECK(hash_arrivals(full) == hash_arrivals(schedule_arrivals(g, c, 3)));
  for (const auto& r : full) {
    CHECK(r.arrival_stage >= 1);
    CHECK(r.arrival_stage <= c.num_stages);
    CHECK(r.departure_stage == r.arrival_stage + 4);
  }
  auto kept = [&](PoolRatio ratio) {
    SimulationConfig d = c;
    d.pool_ratio = ratio;
    std::set<NodeId> out;
    int first = 0;
    for (const auto& r : schedule_arrivals(g, d, 3)) {
      if (r.country == 2) out.insert(r.node);
      else ++first;
    }
    CHECK(first == 60);
    return out;
  };
  const auto all = kept({1, 1}), two_thirds = kept({2, 3}), half = kept({1, 2});
  CHECK(all.size() == 60);
  CHECK(two_thirds.size() == 40);
  CHECK(half.size() == 30);
  CHECK(std::includes(all.begin(), all.end(), two_thirds.begin(), two_thirds.end()));
  CHECK(std::includes(two_thirds.begin(), two_thirds.end(), half.begin(), half.end()));
}

TEST_CASE("simulation bookkeeping") {
  const SimulationConfig c = tiny();
  const SimulationResult res = run_simulation(c);
  CHECK(res.stages.size() == static_cast<std::size_t>(2 * 3 * 12 * 2));
  CHECK(res.report.instances + res.report.excluded == 2);

  for (const InstanceResult& inst : res.instances) {
    for (std::size_t r = 0; r < 3; ++r) {
      const auto& recs = inst.records[r];
      // Matched or dropped, never both; pairs still waiting at the horizon are neither.
      for (const auto& rec : recs) {
        CHECK(!(rec.matched_at && rec.dropped_at));
        if (rec.departure_stage <= c.num_stages + 1) CHECK(rec.matched_at.has_value() != rec.dropped_at.has_value());
        if (rec.dropped_at) CHECK(*rec.dropped_at == rec.departure_stage - 1);
      }
      // Pool conservation per country and stage.
      for (CountryId k = 1; k <= 2; ++k) {
        int carried = 0;
        for (int t = 1; t <= c.num_stages; ++t) {
          int arrivals = 0;
          for (const auto& rec : recs) arrivals += rec.country == k && rec.arrival_stage == t;
          const auto row = std::find_if(res.stages.begin(), res.stages.end(), [&](const StageRow& s) {
            return s.instance == inst.instance && s.regime == kAllRegimes[r] && s.stage == t && s.country == k;
          });
          REQUIRE(row != res.stages.end());
          CHECK(row->pool == carried + arrivals);
          carried = row->pool - row->transplants - row->dropouts;
          CHECK(carried >= 0);
        }
      }
    }
  }
}

TEST_CASE("same seed, same report; workers do not matter") {
  SimulationConfig c = tiny();
  std::ostringstream a, b;
  write_run_csv(a, {run_simulation(c).report});
  c.workers = 2;
  const auto second = run_simulation(c);
  write_run_csv(b, {second.report});
  CHECK(a.str() == b.str());
  std::ostringstream s1, s2;
  write_stage_csv(s1, run_simulation(c).stages);
  write_stage_csv(s2, second.stages);
  CHECK(s1.str() == s2.str());
}

TEST_CASE("csv round trip") {
  SimulationConfig c = tiny();
  c.instances = 1;
  c.regimes = {Regime::NoCooperation, Regime::Merged};
  const auto res = run_simulation(c);
  std::ostringstream stages, runs;
  write_stage_csv(stages, res.stages);
  RunReport extra = res.report;
  extra.c1_bound = Cap::unbounded();
  extra.c2_size = PoolRatio{1, 2};
  extra.c1[0] = 1.0 / 3.0;
  write_run_csv(runs, {res.report, extra});
  CHECK(parse_stage_csv(stages.str()) == res.stages);
  const auto back = parse_run_csv(runs.str());
  REQUIRE(back.size() == 2);
  CHECK(back[0] == res.report);
  CHECK(back[1] == extra);
  CHECK(!back[0].c1[1]);

  CHECK_THROWS_AS(parse_stage_csv("nope\n"), ParseError);
  try {
    parse_stage_csv(std::string(kStageHeader) + "\n0,local,1,1,0,0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_stage_csv(std::string(kStageHeader) + "\n0,both,1,1,0,0,0\n"), ParseError);
}

TEST_CASE("sweep orders cells") {
  SimulationConfig c = tiny();
  c.instances = 1;
  c.regimes = {Regime::Merged};
  const auto out = sweep({{{Cap(3), Cap(3)}, {1, 1}}, {{Cap(2), Cap(2)}, {1, 2}}, {{Cap(2), Cap(2)}, {1, 1}}}, c);
  REQUIRE(out.size() == 3);
  CHECK(out[0].report.c1_bound == Cap(2));
  CHECK(out[0].report.c2_size == PoolRatio{1, 1});
  CHECK(out[1].report.c2_size == PoolRatio{1, 2});
  CHECK(out[2].report.c1_bound == Cap(3));
}
