#include "kep/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "text_util.hpp"

namespace kep {
namespace {

// splitmix64 finaliser; derives independent streams from (seed, instance, purpose).
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, int instance, std::uint64_t purpose) {
  return mix(mix(mix(seed) ^ static_cast<std::uint64_t>(instance)) ^ purpose);
}

constexpr std::uint64_t kPoolStream = 1;
constexpr std::uint64_t kArrivalStream = 2;
constexpr std::uint64_t kSubsampleStream = 3;
constexpr std::uint64_t kOrderStream = 4;

std::size_t regime_index(Regime r) {
  for (std::size_t i = 0; i < std::size(kAllRegimes); ++i) {
    if (kAllRegimes[i] == r) return i;
  }
  return 0;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string PoolRatio::to_string() const { return std::to_string(kept) + ":" + std::to_string(of); }

PoolRatio PoolRatio::parse(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() == 2) {
    const auto a = detail::parse_int<int>(parts[0]);
    const auto b = detail::parse_int<int>(parts[1]);
    if (a && b && *a > 0 && *a <= *b) return PoolRatio{*a, *b};
  }
  throw ConfigError("pool ratio must look like a:b with 0 < a <= b (got '" + std::string(text) + "')");
}

void SimulationConfig::validate() const {
  if (num_stages < 1) throw ConfigError("need at least one stage");
  if (stage_length_months < 1) throw ConfigError("stage length must be positive");
  if (max_stages_in_pool < 1) throw ConfigError("pairs must stay for at least one run");
  if (instances < 1) throw ConfigError("need at least one instance");
  if (workers < 1) throw ConfigError("need at least one worker");
  if (pairs_per_country.empty()) throw ConfigError("need at least one country");
  if (bounds.size() != pairs_per_country.size()) throw ConfigError("one cycle bound per country expected");
  if (!altruists_per_country.empty() && altruists_per_country.size() != pairs_per_country.size()) {
    throw ConfigError("one altruist count per country expected");
  }
  if (pool_ratio.kept < 1 || pool_ratio.kept > pool_ratio.of) throw ConfigError("pool ratio must satisfy 0 < a <= b");
  if (pool_ratio != PoolRatio{} && pairs_per_country.size() < 2) {
    throw ConfigError("a pool ratio needs a second country");
  }
  if (regimes.empty()) throw ConfigError("no regime selected");
  for (int n : pairs_per_country) {
    if (n < 0) throw ConfigError("pair counts must be non-negative");
  }
  const bool all_unbounded = std::none_of(bounds.begin(), bounds.end(), [](Cap b) { return b.finite(); });
  const bool pools = std::any_of(regimes.begin(), regimes.end(), [](Regime r) { return r != Regime::NoCooperation; });
  if (all_unbounded && pools && bounds.size() > 1) {
    throw ConfigError("a merged pool needs at least one finite cycle bound");
  }
  policy();
}

PolicyConfig SimulationConfig::policy() const {
  PolicyConfig p = PolicyConfig::merged_pool(bounds);
  p.chains_enabled = chains_enabled;
  return p;
}

SimulationConfig SimulationConfig::paper_scale() {
  SimulationConfig c;
  c.pairs_per_country = {500, 500};
  return c;
}

CompatibilityGraph simulation_instance(const SimulationConfig& config, int instance) {
  InstanceSpec spec = config.population;
  spec.pairs_per_country = config.pairs_per_country;
  spec.altruists_per_country = config.altruists_per_country;
  spec.incompatible_pairs_only = true;
  spec.seed = stream_seed(config.seed, instance, kPoolStream);
  return sample_instance(spec);
}

std::vector<PatientRecord> schedule_arrivals(const CompatibilityGraph& g, const SimulationConfig& config,
                                             int instance) {
  std::mt19937_64 arrivals(stream_seed(config.seed, instance, kArrivalStream));
  std::uniform_int_distribution<int> stage(1, config.num_stages);
  std::vector<int> arrival(static_cast<std::size_t>(g.num_nodes()));
  for (int& a : arrival) a = stage(arrivals);

  std::vector<char> kept(static_cast<std::size_t>(g.num_nodes()), 1);
  if (g.num_countries() >= 2) {
    std::vector<NodeId> second = g.country_nodes(2);
    std::mt19937_64 thin(stream_seed(config.seed, instance, kSubsampleStream));
    std::shuffle(second.begin(), second.end(), thin);
    const auto keep = static_cast<std::size_t>(
        (static_cast<long long>(second.size()) * config.pool_ratio.kept + config.pool_ratio.of / 2) /
        config.pool_ratio.of);
    for (std::size_t i = keep; i < second.size(); ++i) kept[static_cast<std::size_t>(second[i])] = 0;
  }
  std::vector<PatientRecord> records;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!kept[static_cast<std::size_t>(v)]) continue;
    PatientRecord r;
    r.node = v;
    r.country = g.country(v);
    r.arrival_stage = arrival[static_cast<std::size_t>(v)];
    r.departure_stage = r.arrival_stage + config.max_stages_in_pool;
    records.push_back(r);
  }
  return records;
}

std::uint64_t hash_arrivals(const std::vector<PatientRecord>& records) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  auto feed = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  for (const PatientRecord& r : records) {
    feed(static_cast<std::uint64_t>(r.node));
    feed(static_cast<std::uint64_t>(r.arrival_stage));
  }
  return h;
}

RegimeRun simulate_regime(const CompatibilityGraph& g, std::vector<PatientRecord> records,
                          const SimulationConfig& config, Regime regime, int instance) {
  const PolicyConfig policy = config.policy();
  const int countries = g.num_countries();
  std::vector<int> record_of(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t i = 0; i < records.size(); ++i) record_of[static_cast<std::size_t>(records[i].node)] = static_cast<int>(i);

  RegimeRun run;
  for (int t = 1; t <= config.num_stages; ++t) {
    std::vector<NodeId> active;
    std::vector<int> pool(static_cast<std::size_t>(countries), 0);
    for (const PatientRecord& r : records) {
      if (r.arrival_stage <= t && t < r.departure_stage && !r.matched_at) {
        active.push_back(r.node);
        ++pool[static_cast<std::size_t>(r.country - 1)];
      }
    }
    // Solver ties go to the lowest variable ids; shuffle the pool each stage so
    // they do not systematically favour the country numbered first.
    const std::uint64_t order_seed = stream_seed(config.seed, instance, kOrderStream) ^ mix(static_cast<std::uint64_t>(t));
    auto key = [&](NodeId v) { return mix(order_seed ^ static_cast<std::uint64_t>(v)); };
    std::sort(active.begin(), active.end(), [&](NodeId a, NodeId b) { return key(a) < key(b); });
    std::vector<int> transplants(static_cast<std::size_t>(countries), 0);
    if (!active.empty()) {
      const Subgraph sub = induced_subgraph(g, active);
      const PolicyOutcome out = run_regime(regime, sub.graph, policy, config.regime_options);
      run.timed_out = run.timed_out || out.timed_out;
      transplants = out.per_country;
      for (NodeId local : out.plan.covered_nodes()) {
        PatientRecord& r = records[static_cast<std::size_t>(record_of[static_cast<std::size_t>(sub.origin[static_cast<std::size_t>(local)])])];
        r.matched_at = t;
      }
    }
    std::vector<int> dropouts(static_cast<std::size_t>(countries), 0);
    for (PatientRecord& r : records) {
      if (r.arrival_stage <= t && !r.matched_at && !r.dropped_at && r.departure_stage == t + 1) {
        r.dropped_at = t;
        ++dropouts[static_cast<std::size_t>(r.country - 1)];
      }
    }
    for (CountryId k = 1; k <= countries; ++k) {
      run.stages.push_back(StageRow{instance, regime, t, k, transplants[static_cast<std::size_t>(k - 1)],
                                    dropouts[static_cast<std::size_t>(k - 1)], pool[static_cast<std::size_t>(k - 1)]});
    }
  }
  run.records = std::move(records);
  return run;
}

namespace {

struct InstanceRun {
  InstanceResult result;
  std::vector<StageRow> stages;
  std::vector<std::string> notes;
};

InstanceRun run_instance(const SimulationConfig& config, int instance) {
  InstanceRun out;
  out.result.instance = instance;
  const CompatibilityGraph g = simulation_instance(config, instance);
  const std::size_t countries = config.pairs_per_country.size();
  out.result.totals.assign(std::size(kAllRegimes), {});
  out.result.cumulative.assign(std::size(kAllRegimes), {});
  out.result.records.assign(std::size(kAllRegimes), {});
  std::optional<std::uint64_t> hash;
  for (Regime regime : config.regimes) {
    std::vector<PatientRecord> records = schedule_arrivals(g, config, instance);
    const std::uint64_t h = hash_arrivals(records);
    if (hash && *hash != h) throw InvariantError("arrival schedules differ between regimes");
    hash = h;
    RegimeRun run = simulate_regime(g, std::move(records), config, regime, instance);
    const std::size_t r = regime_index(regime);
    std::vector<int> totals(countries, 0);
    std::vector<int> cumulative;
    int running = 0;
    for (int t = 1; t <= config.num_stages; ++t) {
      for (const StageRow& row : run.stages) {
        if (row.stage != t) continue;
        totals[static_cast<std::size_t>(row.country - 1)] += row.transplants;
        running += row.transplants;
      }
      cumulative.push_back(running);
    }
    out.result.totals[r] = std::move(totals);
    out.result.cumulative[r] = std::move(cumulative);
    out.result.records[r] = std::move(run.records);
    if (run.timed_out) {
      out.result.timed_out = true;
      out.notes.push_back("instance " + std::to_string(instance) + " excluded: solver time limit hit under " +
                          std::string(to_string(regime)));
    }
    out.stages.insert(out.stages.end(), run.stages.begin(), run.stages.end());
  }
  out.result.arrival_hash = hash.value_or(0);
  return out;
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config) {
  config.validate();
  std::vector<InstanceRun> runs(static_cast<std::size_t>(config.instances));
  const int workers = std::min(config.workers, config.instances);
  if (workers <= 1) {
    for (int i = 0; i < config.instances; ++i) runs[static_cast<std::size_t>(i)] = run_instance(config, i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (int i = next++; i < config.instances; i = next++) {
            try {
              runs[static_cast<std::size_t>(i)] = run_instance(config, i);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  SimulationResult result;
  RunReport& report = result.report;
  report.c1_bound = config.bounds.at(0);
  report.c2_bound = config.bounds.size() > 1 ? config.bounds[1] : Cap::unbounded();
  report.c2_size = config.pool_ratio;
  for (InstanceRun& run : runs) {
    result.stages.insert(result.stages.end(), run.stages.begin(), run.stages.end());
    result.notes.insert(result.notes.end(), run.notes.begin(), run.notes.end());
    (run.result.timed_out ? report.excluded : report.instances)++;
    result.instances.push_back(std::move(run.result));
  }
  for (Regime regime : config.regimes) {
    const std::size_t r = regime_index(regime);
    if (report.instances == 0) continue;
    double sum[2] = {0.0, 0.0};
    for (const InstanceResult& inst : result.instances) {
      if (inst.timed_out) continue;
      for (std::size_t k = 0; k < 2 && k < inst.totals[r].size(); ++k) sum[k] += inst.totals[r][k];
    }
    report.c1[r] = sum[0] / report.instances;
    if (config.pairs_per_country.size() > 1) report.c2[r] = sum[1] / report.instances;
  }
  return result;
}

std::vector<SimulationResult> sweep(const std::vector<SweepCell>& grid, const SimulationConfig& config) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  std::vector<SweepCell> cells = grid;
  std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    if (a.bounds != b.bounds) return a.bounds < b.bounds;
    return a.ratio.fraction() > b.ratio.fraction();  // larger country-2 pools first
  });
  std::vector<SimulationResult> out;
  for (const SweepCell& cell : cells) {
    SimulationConfig c = config;
    c.bounds = cell.bounds;
    c.pool_ratio = cell.ratio;
    out.push_back(run_simulation(c));
  }
  return out;
}

void write_stage_csv(std::ostream& out, const std::vector<StageRow>& rows) {
  out << kStageHeader << '\n';
  for (const StageRow& r : rows) {
    out << r.instance << ',' << to_string(r.regime) << ',' << r.stage << ',' << r.country << ',' << r.transplants << ','
        << r.dropouts << ',' << r.pool << '\n';
  }
}

void write_run_csv(std::ostream& out, const std::vector<RunReport>& reports) {
  out << kRunHeader << '\n';
  for (const RunReport& r : reports) {
    out << r.c1_bound.to_string() << ',' << r.c2_bound.to_string() << ',' << r.c2_size.to_string();
    for (const auto& v : r.c1) out << ',' << optional_cell(v);
    for (const auto& v : r.c2) out << ',' << optional_cell(v);
    out << ',' << r.instances << ',' << r.excluded << '\n';
  }
}

namespace {

template <typename Row, typename ParseRow>
std::vector<Row> parse_csv(std::string_view text, std::string_view header, std::size_t columns, const ParseRow& parse_row) {
  std::vector<Row> rows;
  bool seen_header = false;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return;
    if (!seen_header) {
      if (line != header) throw ParseError(line_no, "expected header '" + std::string(header) + "'");
      seen_header = true;
      return;
    }
    const auto cells = detail::split(line, ',');
    if (cells.size() != columns) {
      throw ParseError(line_no, "expected " + std::to_string(columns) + " columns, found " + std::to_string(cells.size()));
    }
    rows.push_back(parse_row(line_no, cells));
  });
  if (!seen_header) throw ParseError(1, "missing header");
  return rows;
}

int int_cell(std::size_t line_no, std::string_view cell) {
  const auto v = detail::parse_int<int>(cell);
  if (!v) throw ParseError(line_no, "expected an integer, got '" + std::string(cell) + "'");
  return *v;
}

}  // namespace

std::vector<StageRow> parse_stage_csv(std::string_view text) {
  return parse_csv<StageRow>(text, kStageHeader, 7, [](std::size_t line_no, const std::vector<std::string_view>& c) {
    StageRow r;
    r.instance = int_cell(line_no, c[0]);
    const auto regime = parse_regime(c[1]);
    if (!regime) throw ParseError(line_no, "unknown regime '" + std::string(c[1]) + "'");
    r.regime = *regime;
    r.stage = int_cell(line_no, c[2]);
    r.country = int_cell(line_no, c[3]);
    r.transplants = int_cell(line_no, c[4]);
    r.dropouts = int_cell(line_no, c[5]);
    r.pool = int_cell(line_no, c[6]);
    return r;
  });
}

std::vector<RunReport> parse_run_csv(std::string_view text) {
  return parse_csv<RunReport>(text, kRunHeader, 11, [](std::size_t line_no, const std::vector<std::string_view>& c) {
    RunReport r;
    try {
      r.c1_bound = Cap::parse(c[0]);
      r.c2_bound = Cap::parse(c[1]);
      r.c2_size = PoolRatio::parse(c[2]);
    } catch (const ConfigError& e) {
      throw ParseError(line_no, e.what());
    }
    auto value = [&](std::string_view cell) -> std::optional<double> {
      if (cell.empty()) return std::nullopt;
      const auto v = detail::parse_double(cell);
      if (!v) throw ParseError(line_no, "expected a number, got '" + std::string(cell) + "'");
      return v;
    };
    for (int i = 0; i < 3; ++i) r.c1[i] = value(c[static_cast<std::size_t>(3 + i)]);
    for (int i = 0; i < 3; ++i) r.c2[i] = value(c[static_cast<std::size_t>(6 + i)]);
    r.instances = int_cell(line_no, c[9]);
    r.excluded = int_cell(line_no, c[10]);
    return r;
  });
}

}  // namespace kep
