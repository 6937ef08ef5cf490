#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kep/graph.hpp"
#include "kep/instance.hpp"
#include "kep/policies.hpp"

namespace kep {

/// Country 2 keeps `kept` out of every `of` pairs; country 1 is untouched.
struct PoolRatio {
  int kept = 1;
  int of = 1;
  friend auto operator<=>(const PoolRatio&, const PoolRatio&) = default;
  std::string to_string() const;
  double fraction() const { return static_cast<double>(kept) / of; }
  /// "a:b" with 0 < a <= b. Throws ConfigError.
  static PoolRatio parse(std::string_view text);
};

struct SimulationConfig {
  int num_stages = 12;
  int stage_length_months = 3;
  // A pair takes part in at most this many consecutive runs.
  int max_stages_in_pool = 4;
  int instances = 20;
  // Pairs per country over the whole horizon, before the ratio subsample.
  std::vector<int> pairs_per_country{100, 100};
  std::vector<int> altruists_per_country;
  PoolRatio pool_ratio;
  std::vector<Cap> bounds{Cap(3), Cap(3)};
  std::vector<Regime> regimes{Regime::NoCooperation, Regime::Consecutive, Regime::Merged};
  bool chains_enabled = false;
  std::uint64_t seed = 1;
  // Blood group and PRA tables; counts and seed are overridden per instance.
  InstanceSpec population;
  RegimeOptions regime_options;
  int workers = 1;

  int horizon_months() const { return num_stages * stage_length_months; }
  /// Throws ConfigError.
  void validate() const;
  PolicyConfig policy() const;
  /// Desk scale is the default; paper scale is 500 pairs per country.
  static SimulationConfig paper_scale();
};

struct PatientRecord {
  NodeId node = kNoNode;
  CountryId country = 1;
  int arrival_stage = 1;
  int departure_stage = 5;  // first stage the pair is no longer in the pool
  std::optional<int> matched_at;
  std::optional<int> dropped_at;  // stage of its last run, when it left unmatched
};

/// One row of stage_report.csv.
struct StageRow {
  int instance = 0;
  Regime regime = Regime::NoCooperation;
  int stage = 1;
  CountryId country = 1;
  int transplants = 0;
  int dropouts = 0;
  int pool = 0;  // pairs present at this stage's run
  friend bool operator==(const StageRow&, const StageRow&) = default;
};

/// One row of run_report.csv: per-country averages over included instances.
struct RunReport {
  Cap c1_bound;
  Cap c2_bound;
  PoolRatio c2_size;
  // Index by regime (kAllRegimes order); nullopt when that regime was not run.
  std::optional<double> c1[3];
  std::optional<double> c2[3];
  int instances = 0;
  int excluded = 0;
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct InstanceResult {
  int instance = 0;
  std::uint64_t arrival_hash = 0;
  // totals[r][k-1] over the horizon, r indexed like kAllRegimes.
  std::vector<std::vector<int>> totals;
  // cumulative[r][stage-1] = all-country transplants up to that stage.
  std::vector<std::vector<int>> cumulative;
  bool timed_out = false;
  std::vector<std::vector<PatientRecord>> records;  // per regime
};

struct SimulationResult {
  RunReport report;
  std::vector<StageRow> stages;
  std::vector<InstanceResult> instances;
  std::vector<std::string> notes;
};

/// The sampled pool of one instance: full-size graph before subsampling.
CompatibilityGraph simulation_instance(const SimulationConfig& config, int instance);

/// Arrival stages for every node of `g`, uniform over 1..num_stages and then
/// thinned for the pool ratio: country-2 nodes outside the kept fraction are
/// dropped from the schedule. Deterministic in (config.seed, instance); the
/// kept set for a smaller ratio is a subset of the one for a larger ratio.
std::vector<PatientRecord> schedule_arrivals(const CompatibilityGraph& g, const SimulationConfig& config,
                                             int instance);

std::uint64_t hash_arrivals(const std::vector<PatientRecord>& records);

/// Runs one regime over the stages of one instance. Appends stage rows.
struct RegimeRun {
  std::vector<PatientRecord> records;
  std::vector<StageRow> stages;
  bool timed_out = false;
};
RegimeRun simulate_regime(const CompatibilityGraph& g, std::vector<PatientRecord> records,
                          const SimulationConfig& config, Regime regime, int instance);

SimulationResult run_simulation(const SimulationConfig& config);

struct SweepCell {
  std::vector<Cap> bounds;
  PoolRatio ratio;
};

/// Every cell on the same instances and arrivals; results sorted by cell.
std::vector<SimulationResult> sweep(const std::vector<SweepCell>& grid, const SimulationConfig& config);

// CSV output. Doubles are written in shortest round-trip form; regimes that
// were not run leave their cells empty.
inline constexpr std::string_view kStageHeader = "instance,regime,stage,country,transplants,dropouts,pool";
inline constexpr std::string_view kRunHeader =
    "c1_bound,c2_bound,c2_size,c1_local,c1_seq,c1_merged,c2_local,c2_seq,c2_merged,instances,excluded";
void write_stage_csv(std::ostream& out, const std::vector<StageRow>& rows);
void write_run_csv(std::ostream& out, const std::vector<RunReport>& reports);
/// Throw ParseError with line numbers.
std::vector<StageRow> parse_stage_csv(std::string_view text);
std::vector<RunReport> parse_run_csv(std::string_view text);

}  // namespace kep
