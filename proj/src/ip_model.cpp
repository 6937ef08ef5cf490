#include "kep/ip_model.hpp"

#include <algorithm>
#include <cmath>

namespace kep {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Cycle: return "cycle";
    case VarKind::Segment: return "segment";
    case VarKind::Edge: return "edge";
    case VarKind::NationalEdge: return "national_edge";
    case VarKind::InternationalEdge: return "international_edge";
    case VarKind::LayerEdge: return "layer_edge";
    case VarKind::CountryLayer: return "country_layer";
    case VarKind::InIndicator: return "in_indicator";
    case VarKind::OutIndicator: return "out_indicator";
  }
  return "?";
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

VarId IpModel::add_variable(const VarInfo& info, double objective) {
  vars_.push_back(info);
  objective_.push_back(objective);
  return VarId{num_variables() - 1};
}

void IpModel::set_objective(VarId v, double coef) { objective_.at(static_cast<std::size_t>(v.index)) = coef; }

void IpModel::add_constraint(std::vector<Term> terms, Relation relation, double rhs, std::string_view tag) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (t.var.index < 0 || t.var.index >= num_variables()) throw InvariantError("constraint uses an undeclared variable");
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  if (merged.empty()) {
    const bool ok = relation == Relation::LessEqual    ? 0.0 <= rhs
                    : relation == Relation::Equal      ? rhs == 0.0
                                                       : 0.0 >= rhs;
    if (!ok) throw InvariantError("constraint '" + std::string(tag) + "' is empty and violated");
    return;
  }
  constraints_.push_back(LinearConstraint{std::move(merged), relation, rhs, std::string(tag)});
}

int IpModel::add_cycle(Cycle c) {
  cycles_.push_back(std::move(c));
  return static_cast<int>(cycles_.size()) - 1;
}

int IpModel::add_segment(Segment s) {
  segments_.push_back(std::move(s));
  return static_cast<int>(segments_.size()) - 1;
}

std::string IpModel::variable_name(VarId v) const {
  const VarInfo& info = variable(v);
  auto arc = [&] { return std::to_string(info.source) + "_" + std::to_string(info.target); };
  switch (info.kind) {
    case VarKind::Cycle: return "x_c" + std::to_string(info.item);
    case VarKind::Segment: return "z_s" + std::to_string(info.item);
    case VarKind::Edge: return "y_" + arc();
    case VarKind::NationalEdge: return "yn_" + arc();
    case VarKind::InternationalEdge: return "yi_" + arc();
    case VarKind::LayerEdge: return "yt" + std::to_string(info.layer) + "_" + arc();
    case VarKind::CountryLayer: return "b" + std::to_string(info.country) + "_" + std::to_string(info.layer);
    case VarKind::InIndicator: return "ep_" + std::to_string(info.source);
    case VarKind::OutIndicator: return "em_" + std::to_string(info.source);
  }
  return "v" + std::to_string(v.index);
}

double IpModel::evaluate(std::span<const std::uint8_t> values) const {
  double total = 0.0;
  for (std::size_t i = 0; i < objective_.size(); ++i) {
    if (values[i]) total += objective_[i];
  }
  return total;
}

bool IpModel::is_feasible(std::span<const std::uint8_t> values, double tol) const {
  if (values.size() != vars_.size()) return false;
  for (const LinearConstraint& c : constraints_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) {
      if (values[static_cast<std::size_t>(t.var.index)]) lhs += t.coef;
    }
    switch (c.relation) {
      case Relation::LessEqual:
        if (lhs > c.rhs + tol) return false;
        break;
      case Relation::Equal:
        if (std::abs(lhs - c.rhs) > tol) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < c.rhs - tol) return false;
        break;
    }
  }
  return true;
}

int IpModel::count_tag(std::string_view tag) const {
  return static_cast<int>(
      std::count_if(constraints_.begin(), constraints_.end(), [&](const LinearConstraint& c) { return c.tag == tag; }));
}

}  // namespace kep
