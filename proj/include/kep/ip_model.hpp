#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kep/enumeration.hpp"

namespace kep {

struct VarId {
  int index = -1;
  friend auto operator<=>(VarId, VarId) = default;
};

enum class VarKind {
  Cycle,              // x_c, payload: cycle
  Segment,            // z_s, payload: segment
  Edge,               // y_ij, payload: arc
  NationalEdge,       // y-hat_ij: arc used by a national cycle
  InternationalEdge,  // y-check_ij: arc used by an international cycle
  LayerEdge,          // y^t_ij
  CountryLayer,       // b_k^t
  InIndicator,        // e+(i): node receives through an international arc
  OutIndicator,       // e-(i): node gives through an international arc
};

std::string_view to_string(VarKind kind);

/// Which object a variable stands for. Fields not used by a kind stay at -1.
struct VarInfo {
  VarKind kind = VarKind::Edge;
  int item = -1;  // cycle or segment index into the model's payload lists
  NodeId source = kNoNode;
  NodeId target = kNoNode;  // arc endpoints; `source` alone for indicators
  int layer = -1;
  CountryId country = -1;
};

enum class Relation { LessEqual, Equal, GreaterEqual };
std::string_view to_string(Relation r);

struct Term {
  VarId var;
  double coef = 0.0;
};

/// Constraint family tags, one per kind of linear constraint the builders emit.
namespace tags {
inline constexpr std::string_view kFlowConservation = "flow_conservation";
inline constexpr std::string_view kOutDegree = "out_degree";
inline constexpr std::string_view kPathLength = "path_length";
inline constexpr std::string_view kNodePacking = "node_packing";
inline constexpr std::string_view kCoverOut = "cover_out";      // out-degree <= coverage
inline constexpr std::string_view kCoverOnce = "cover_once";    // coverage <= 1
inline constexpr std::string_view kCycleArcsLower = "cycle_arcs_lower";
inline constexpr std::string_view kCycleArcsUpper = "cycle_arcs_upper";
inline constexpr std::string_view kSegmentArcsLower = "segment_arcs_lower";
inline constexpr std::string_view kSegmentArcsUpper = "segment_arcs_upper";
inline constexpr std::string_view kIndicator = "indicator";
inline constexpr std::string_view kNationalFlow = "national_flow";
inline constexpr std::string_view kInternationalFlow = "international_flow";
inline constexpr std::string_view kInternationalPathLength = "international_path_length";
inline constexpr std::string_view kNationalPathLength = "national_path_length";
inline constexpr std::string_view kSegmentPathLength = "segment_path_length";
inline constexpr std::string_view kLayerSum = "layer_sum";
inline constexpr std::string_view kLayerFlow = "layer_flow";
inline constexpr std::string_view kCountrySegments = "country_segments";
inline constexpr std::string_view kCountryPairs = "country_pairs";
inline constexpr std::string_view kCountryNumber = "country_number";
inline constexpr std::string_view kCountryNumberBound = "country_number_bound";
inline constexpr std::string_view kSegmentStart = "segment_start";
inline constexpr std::string_view kSegmentEnd = "segment_end";
inline constexpr std::string_view kSegmentLayer = "segment_layer";
}  // namespace tags

struct LinearConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string tag;
};

/// A maximisation problem over binary variables. Constraints are stored with
/// merged, non-zero coefficients; the model also keeps the cycles and segments
/// its variables refer to so solutions can be decoded without the builder.
class IpModel {
 public:
  VarId add_variable(const VarInfo& info, double objective = 0.0);
  /// Merges duplicate variables and drops zero coefficients. A constraint left
  /// without terms is dropped if 0 satisfies it; otherwise InvariantError.
  void add_constraint(std::vector<Term> terms, Relation relation, double rhs, std::string_view tag);
  void set_objective(VarId v, double coef);

  int add_cycle(Cycle c);
  int add_segment(Segment s);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const VarInfo& variable(VarId v) const { return vars_.at(static_cast<std::size_t>(v.index)); }
  std::span<const VarInfo> variables() const { return vars_; }
  std::span<const LinearConstraint> constraints() const { return constraints_; }
  std::span<const double> objective() const { return objective_; }
  std::span<const Cycle> cycles() const { return cycles_; }
  std::span<const Segment> segments() const { return segments_; }

  /// Deterministic LP-file name: x_c3, z_s0, y_1_2, yn_1_2, yi_1_2, yt2_1_2, b1_2, ep_4, em_4.
  std::string variable_name(VarId v) const;

  /// Objective value of a 0/1 vector.
  double evaluate(std::span<const std::uint8_t> values) const;
  /// True when every constraint holds within `tol`.
  bool is_feasible(std::span<const std::uint8_t> values, double tol = 1e-9) const;

  /// Free-form notes from the builder (e.g. questionable policy combinations).
  std::vector<std::string>& warnings() { return warnings_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Number of constraints carrying `tag`.
  int count_tag(std::string_view tag) const;

 private:
  std::vector<VarInfo> vars_;
  std::vector<double> objective_;
  std::vector<LinearConstraint> constraints_;
  std::vector<Cycle> cycles_;
  std::vector<Segment> segments_;
  std::vector<std::string> warnings_;
};

}  // namespace kep
