#include <random>

#include "doctest.h"
#include "kep/enumeration.hpp"
#include "kep/formulations.hpp"
#include "kep/lp_format.hpp"
#include "oracles.hpp"

using namespace kep;

TEST_CASE("single variable model") {
  IpModel m;
  m.add_variable(VarInfo{VarKind::Edge, -1, 0, 1}, 1.0);
  m.add_constraint({{VarId{0}, 1.0}}, Relation::LessEqual, 1.0, "cap");
  const std::string text = export_lp_text(m);
  CHECK(text.find("Maximize") == 0);
  CHECK(text.find("cap_0: + 1 y_0_1 <= 1") != std::string::npos);
  const LpDocument doc = parse_lp_text(text);
  CHECK(doc.maximize);
  CHECK(doc.objective.size() == 1);
  CHECK(doc.rows.size() == 1);
  CHECK(doc.binaries == std::vector<std::string>{"y_0_1"});
}

TEST_CASE("cycle model round-trip") {
  const auto g = oracle::graph({1, 1, 1}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
  const auto m = build_cycle_model(enumerate_cycles(g, PolicyConfig::uniform(1, Cap(2))), 3);
  const LpDocument doc = parse_lp_text(export_lp_text(m));
  CHECK(doc.binaries.size() == 2);
  CHECK(doc.rows.size() == 3);
  CHECK(doc.rows[0].name == "node_packing_0");
}

TEST_CASE("empty model") {
  const LpDocument doc = parse_lp_text(export_lp_text(IpModel{}));
  CHECK(doc.objective.empty());
  CHECK(doc.rows.empty());
  CHECK(doc.binaries.empty());
}

TEST_CASE("coefficients and right-hand sides survive the round-trip") {
  std::mt19937_64 rng(1);
  const auto g = oracle::random_graph(rng, 8, 0.5, 2);
  PolicyConfig p = PolicyConfig::uniform(2, Cap(3));
  p.max_countries_per_cycle = Cap(1);
  const auto m = build_mixed_model(g, p);
  const LpDocument doc = parse_lp_text(export_lp_text(m));
  REQUIRE(doc.rows.size() == static_cast<std::size_t>(m.num_constraints()));
  REQUIRE(doc.binaries.size() == static_cast<std::size_t>(m.num_variables()));
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const LinearConstraint& c = m.constraints()[r];
    CHECK(doc.rows[r].relation == c.relation);
    CHECK(doc.rows[r].rhs == c.rhs);
    REQUIRE(doc.rows[r].terms.size() == c.terms.size());
    for (std::size_t t = 0; t < c.terms.size(); ++t) {
      CHECK(doc.rows[r].terms[t].var == m.variable_name(c.terms[t].var));
      CHECK(doc.rows[r].terms[t].coef == c.terms[t].coef);
    }
  }
}

TEST_CASE("grammar errors") {
  CHECK_THROWS_AS(parse_lp_text("Subject To\nEnd\n"), ParseError);
  CHECK_THROWS_AS(parse_lp_text("Maximize\n obj: x\nSubject To\n c: x <= 1\nEnd\n"), ParseError);  // x not binary
  CHECK_THROWS_AS(parse_lp_text("Maximize\n obj: x\nSubject To\n c: x 1\nBinaries\n x\nEnd\n"), ParseError);
  CHECK_THROWS_AS(parse_lp_text("Maximize\n obj: x\nSubject To\n c: x <= 1\n c: x <= 1\nBinaries\n x\nEnd\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_lp_text("Maximize\n obj: x\nSubject To\nBinaries\n x\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse_lp_text("Maximize\n obj: x\nSubject To\n c: x <= $\nBinaries\n x\nEnd\n"),
                       doctest::Contains("line 4"), ParseError);
  CHECK_NOTHROW(parse_lp_text("\\ comment\nMaximize\n obj: 2 x - y\nSubject To\n c: x + y >= -1\nBinaries\n x y\nEnd\n"));
}
