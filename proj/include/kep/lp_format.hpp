#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kep/ip_model.hpp"

namespace kep {

/// CPLEX-style LP text: Maximize / Subject To / Binaries / End. Constraints
/// are named `<tag>_<n>` with n counting per tag.
void write_lp(std::ostream& out, const IpModel& model);
std::string export_lp_text(const IpModel& model);

struct LpTerm {
  std::string var;
  double coef = 0.0;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct LpDocument {
  bool maximize = true;
  std::vector<LpTerm> objective;
  std::vector<LpRow> rows;
  std::vector<std::string> binaries;
};

/// Reads the subset of the LP format written by write_lp and checks it:
/// section order, row syntax, unique row names and binary declarations for
/// every referenced variable. Throws ParseError with the offending line.
LpDocument parse_lp_text(std::string_view text);

}  // namespace kep
