#include "kep/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "kep/enumeration.hpp"
#include "kep/instance.hpp"
#include "kep/lp_format.hpp"
#include "kep/plan.hpp"
#include "kep/policies.hpp"
#include "kep/simulator.hpp"
#include "kep/svg.hpp"
#include "kep/types.hpp"
#include "text_util.hpp"

namespace kep::cli {
namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimedOut : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path.string());
}

std::vector<Cap> parse_bounds(const std::string& text) {
  std::vector<Cap> out;
  for (auto part : detail::split(text, ':')) out.push_back(Cap::parse(part));
  if (out.empty()) throw ConfigError("empty bounds");
  return out;
}

std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> out;
  for (auto part : detail::split(text, ',')) {
    const auto v = detail::parse_int<int>(part);
    if (!v || *v < 0) throw ConfigError("bad count '" + std::string(part) + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<Regime> parse_regimes(const std::string& text) {
  std::vector<Regime> out;
  for (auto part : detail::split(text, ',')) {
    const auto r = parse_regime(part);
    if (!r) throw ConfigError("unknown regime '" + std::string(part) + "' (expected local, seq or merged)");
    out.push_back(*r);
  }
  return out;
}

ModelChoice parse_model(const std::string& text) {
  const auto m = parse_model_choice(text);
  if (!m) throw ConfigError("unknown model '" + text + "' (expected auto, cycle, edge, mixed or atcz)");
  return *m;
}

std::optional<std::chrono::duration<double>> timeout_of(const std::optional<double>& secs) {
  if (!secs) return std::nullopt;
  if (*secs <= 0) throw ConfigError("timeout must be positive");
  return std::chrono::duration<double>(*secs);
}

// Flat key=value config: each entry becomes --key=value ahead of the explicit
// flags, so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    const std::string text = read_file(path);
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
      line = detail::strip_comment(line);
      if (line.empty()) return;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, path + ": expected key=value");
      const auto key = detail::trim(line.substr(0, eq));
      const auto value = detail::trim(line.substr(eq + 1));
      if (key.empty()) throw ParseError(line_no, path + ": empty key");
      from_file.push_back("--" + std::string(key) + "=" + std::string(value));
    });
  }
  if (!out.empty()) out.insert(out.begin() + 1, from_file.begin(), from_file.end());
  return out;
}

struct SimFlags {
  std::optional<std::string> bounds, ratio, regimes, pairs, altruists, model, population;
  std::optional<int> stages, instances, workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> timeout;
  std::string scale = "desk";
  bool chains = false;
  std::string out_dir = ".";

  void attach(CLI::App* cmd) {
    cmd->add_option("--bounds", bounds, "cycle bounds per country, e.g. 3:3 or 2:inf");
    cmd->add_option("--ratio", ratio, "country 2 pool size a:b");
    cmd->add_option("--regimes", regimes, "comma list of local, seq, merged");
    cmd->add_option("--stages", stages, "matching runs");
    cmd->add_option("--instances", instances, "random instances");
    cmd->add_option("--seed", seed);
    cmd->add_option("--scale", scale, "desk (100 pairs/country) or paper (500)")->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--pairs", pairs, "pairs per country, comma separated");
    cmd->add_option("--altruists", altruists, "altruists per country, comma separated");
    cmd->add_option("--population", population, "instance spec file with blood group and PRA tables");
    cmd->add_option("--model", model, "auto, cycle, edge, mixed or atcz");
    cmd->add_option("--timeout", timeout, "seconds per solve");
    cmd->add_option("--workers", workers, "parallel instances");
    cmd->add_flag("--chains", chains, "allow altruist chains");
    cmd->add_option("--out", out_dir, "output directory");
  }

  SimulationConfig config() const {
    SimulationConfig c = scale == "paper" ? SimulationConfig::paper_scale() : SimulationConfig{};
    if (population) c.population = parse_instance_spec(read_file(*population));
    if (bounds) c.bounds = parse_bounds(*bounds);
    if (ratio) c.pool_ratio = PoolRatio::parse(*ratio);
    if (regimes) c.regimes = parse_regimes(*regimes);
    if (pairs) c.pairs_per_country = parse_counts(*pairs);
    if (altruists) c.altruists_per_country = parse_counts(*altruists);
    if (stages) c.num_stages = *stages;
    if (instances) c.instances = *instances;
    if (seed) c.seed = *seed;
    if (workers) c.workers = *workers;
    if (model) c.regime_options.model = parse_model(*model);
    c.regime_options.solve.time_limit = timeout_of(timeout);
    c.chains_enabled = chains;
    if (c.bounds.size() == 1) c.bounds.resize(c.pairs_per_country.size(), c.bounds[0]);
    c.validate();
    return c;
  }
};

void print_report(std::ostream& out, const RunReport& r) {
  out << "bounds " << r.c1_bound.to_string() << ':' << r.c2_bound.to_string() << "  country 2 size "
      << r.c2_size.to_string() << "  instances " << r.instances;
  if (r.excluded) out << " (" << r.excluded << " excluded)";
  out << '\n';
  for (int k = 1; k <= 2; ++k) {
    const auto& side = k == 1 ? r.c1 : r.c2;
    out << "  country " << k << ':';
    for (std::size_t i = 0; i < 3; ++i) {
      if (side[i]) out << ' ' << to_string(kAllRegimes[i]) << ' ' << format_number(*side[i]);
    }
    if (side[0] && side[2] && *side[0] > 0) out << "  benefit " << format_number(*side[2] / *side[0]);
    out << '\n';
  }
}

void write_stage_outputs(const fs::path& dir, const std::vector<StageRow>& stages, int countries) {
  std::ostringstream csv;
  write_stage_csv(csv, stages);
  write_file(dir / "stage_report.csv", csv.str());
  for (CountryId k = 1; k <= countries; ++k) {
    write_file(dir / ("stages_country" + std::to_string(k) + ".svg"), svg::render(svg::stage_chart(stages, k)));
  }
}

void write_run_outputs(const fs::path& dir, const std::vector<RunReport>& reports, bool heatmaps) {
  std::ostringstream csv;
  write_run_csv(csv, reports);
  write_file(dir / "run_report.csv", csv.str());
  if (!heatmaps) return;
  for (CountryId k = 1; k <= 2; ++k) {
    write_file(dir / ("benefit_country" + std::to_string(k) + ".svg"), svg::render(svg::benefit_heatmap(reports, k)));
  }
}

int cmd_gen(const std::optional<std::string>& spec_path, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& pairs, const std::optional<std::string>& altruists, bool incompatible,
            const std::string& out_path, std::ostream& out, std::ostream& err) {
  InstanceSpec spec = spec_path ? parse_instance_spec(read_file(*spec_path)) : InstanceSpec{};
  if (seed) spec.seed = *seed;
  if (pairs) spec.pairs_per_country = parse_counts(*pairs);
  if (altruists) spec.altruists_per_country = parse_counts(*altruists);
  if (incompatible) spec.incompatible_pairs_only = true;
  const CompatibilityGraph g = sample_instance(spec);
  const std::string text = format_instance(g);
  std::ostream& info = out_path == "-" ? err : out;
  if (out_path == "-") {
    out << text;
  } else {
    write_file(out_path, text);
  }
  info << "nodes " << g.num_nodes() << " arcs " << g.num_arcs() << '\n';
  return kOk;
}

struct SolveFlags {
  std::string instance;
  std::string bounds = "3:3";
  std::string regime = "merged";
  std::string model = "auto";
  std::optional<double> timeout;
  std::optional<std::string> export_lp, out;
  bool explain = false, dump_cycles = false, chains = false;
};

void explain_model(std::ostream& out, const IpModel& model) {
  std::map<std::string, int> seen;
  out << "variables " << model.num_variables() << " constraints " << model.num_constraints() << '\n';
  for (const LinearConstraint& c : model.constraints()) {
    out << c.tag << '_' << seen[c.tag]++ << ':';
    for (const Term& t : c.terms) {
      out << ' ' << (t.coef < 0 ? "- " : "+ ");
      if (std::abs(t.coef) != 1.0) out << format_number(std::abs(t.coef)) << ' ';
      out << model.variable_name(t.var);
    }
    out << ' ' << (c.relation == Relation::LessEqual ? "<=" : c.relation == Relation::Equal ? "=" : ">=") << ' '
        << format_number(c.rhs) << '\n';
  }
}

int cmd_solve(const SolveFlags& f, std::ostream& out) {
  const CompatibilityGraph g = parse_instance(read_file(f.instance));
  std::vector<Cap> bounds = parse_bounds(f.bounds);
  if (bounds.size() == 1) bounds.resize(static_cast<std::size_t>(std::max(1, g.num_countries())), bounds[0]);
  if (static_cast<int>(bounds.size()) != g.num_countries()) {
    throw ConfigError("the instance has " + std::to_string(g.num_countries()) + " countries but --bounds gives " +
                      std::to_string(bounds.size()));
  }
  PolicyConfig policy = PolicyConfig::merged_pool(bounds);
  policy.chains_enabled = f.chains;
  const auto regime = parse_regime(f.regime);
  if (!regime) throw ConfigError("unknown regime '" + f.regime + "' (expected local, seq or merged)");
  RegimeOptions options;
  options.model = parse_model(f.model);
  options.solve.time_limit = timeout_of(f.timeout);

  if (f.export_lp || f.explain || f.dump_cycles) {
    const bool reduce = policy.chains_enabled && std::any_of(g.nodes().begin(), g.nodes().end(), [](const Node& n) {
      return n.kind == NodeKind::AltruisticDonor;
    });
    const CompatibilityGraph pool = reduce ? reduce_chains_to_cycles(g) : g;
    if (f.dump_cycles) {
      for (const Cycle& c : enumerate_cycles(pool, policy)) {
        out << "cycle";
        for (NodeId v : c.nodes) out << ' ' << v;
        out << '\n';
      }
    }
    if (f.export_lp || f.explain) {
      const IpModel model = build_pool_model(pool, policy, options.model);
      if (f.export_lp) write_file(*f.export_lp, export_lp_text(model));
      if (f.explain) explain_model(out, model);
    }
  }

  const PolicyOutcome result = run_regime(*regime, g, policy, options);
  std::ostringstream summary;
  summary << "regime " << to_string(*regime) << '\n';
  summary << "objective " << result.total() << '\n';
  for (std::size_t k = 0; k < result.per_country.size(); ++k) {
    summary << "country " << k + 1 << ' ' << result.per_country[k] << '\n';
  }
  summary << format_plan(result.plan);
  out << summary.str();
  if (f.out) write_file(*f.out, summary.str());
  if (result.timed_out) throw TimedOut("time limit reached; the plan above is the best found");
  return kOk;
}

int cmd_simulate(const SimFlags& f, std::ostream& out, std::ostream& err) {
  const SimulationConfig config = f.config();
  const SimulationResult result = run_simulation(config);
  const fs::path dir(f.out_dir);
  write_stage_outputs(dir, result.stages, static_cast<int>(config.pairs_per_country.size()));
  write_run_outputs(dir, {result.report}, false);
  print_report(out, result.report);
  for (const std::string& note : result.notes) err << "note: " << note << '\n';
  return result.report.excluded ? kTimeout : kOk;
}

int cmd_sweep(const SimFlags& f, const std::string& grid, const std::string& ratios, std::ostream& out,
              std::ostream& err) {
  const SimulationConfig config = f.config();
  std::vector<SweepCell> cells;
  for (auto b : detail::split(grid, ',')) {
    for (auto r : detail::split(ratios, ',')) {
      std::vector<Cap> bounds = parse_bounds(std::string(b));
      if (bounds.size() != config.pairs_per_country.size()) throw ConfigError("grid cell '" + std::string(b) + "' needs one bound per country");
      cells.push_back(SweepCell{std::move(bounds), PoolRatio::parse(r)});
    }
  }
  for (const SweepCell& cell : cells) {
    SimulationConfig c = config;
    c.bounds = cell.bounds;
    c.pool_ratio = cell.ratio;
    c.validate();
  }
  const auto results = sweep(cells, config);
  std::vector<RunReport> reports;
  int excluded = 0;
  for (const SimulationResult& r : results) {
    reports.push_back(r.report);
    excluded += r.report.excluded;
    print_report(out, r.report);
    for (const std::string& note : r.notes) err << "note: " << note << '\n';
  }
  write_run_outputs(fs::path(f.out_dir), reports, true);
  return excluded ? kTimeout : kOk;
}

int cmd_report(const std::optional<std::string>& runs, const std::optional<std::string>& stages,
               const std::string& out_dir, std::ostream& out) {
  if (!runs && !stages) throw ConfigError("report needs --runs and/or --stages");
  const fs::path dir(out_dir);
  if (runs) {
    const auto reports = parse_run_csv(read_file(*runs));
    for (const RunReport& r : reports) print_report(out, r);
    for (CountryId k = 1; k <= 2; ++k) {
      write_file(dir / ("benefit_country" + std::to_string(k) + ".svg"), svg::render(svg::benefit_heatmap(reports, k)));
    }
  }
  if (stages) {
    const auto rows = parse_stage_csv(read_file(*stages));
    CountryId countries = 0;
    for (const StageRow& r : rows) countries = std::max(countries, r.country);
    for (CountryId k = 1; k <= countries; ++k) {
      write_file(dir / ("stages_country" + std::to_string(k) + ".svg"), svg::render(svg::stage_chart(rows, k)));
    }
    out << "stage rows " << rows.size() << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kidney exchange programmes across countries: solve pools and simulate cooperation regimes", "kep"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* gen = app.add_subcommand("gen", "sample a random instance");
  std::optional<std::string> gen_spec, gen_pairs, gen_altruists;
  std::optional<std::uint64_t> gen_seed;
  bool gen_incompatible = false;
  std::string gen_out = "-";
  gen->add_option("--spec", gen_spec, "instance spec file (key=value)");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--pairs", gen_pairs, "pairs per country, comma separated");
  gen->add_option("--altruists", gen_altruists, "altruists per country, comma separated");
  gen->add_flag("--incompatible-only", gen_incompatible, "redraw self-compatible pairs");
  gen->add_option("--out", gen_out, "instance file, - for stdout");

  auto* solve_cmd = app.add_subcommand("solve", "clear one pool");
  SolveFlags sf;
  solve_cmd->add_option("instance", sf.instance, "instance file")->required();
  solve_cmd->add_option("--bounds", sf.bounds, "cycle bounds per country, e.g. 3:3 or 2:inf");
  solve_cmd->add_option("--regime", sf.regime, "local, seq or merged");
  solve_cmd->add_option("--model", sf.model, "auto, cycle, edge, mixed or atcz");
  solve_cmd->add_option("--timeout", sf.timeout, "seconds per solve");
  solve_cmd->add_option("--export-lp", sf.export_lp, "write the pool model in LP format");
  solve_cmd->add_option("--out", sf.out, "write the summary to a file");
  solve_cmd->add_flag("--explain", sf.explain, "list every constraint with its family tag");
  solve_cmd->add_flag("--dump-cycles", sf.dump_cycles, "list the enumerated cycles");
  solve_cmd->add_flag("--chains", sf.chains, "allow altruist chains");

  auto* sim = app.add_subcommand("simulate", "multi-stage simulation of the cooperation regimes");
  SimFlags sim_flags;
  sim_flags.attach(sim);

  auto* sweep_cmd = app.add_subcommand("sweep", "simulate a grid of bounds and pool sizes");
  SimFlags sweep_flags;
  sweep_flags.attach(sweep_cmd);
  std::string grid = "2:2,2:3,3:2,3:3", ratios = "1:1";
  sweep_cmd->add_option("--grid", grid, "comma list of bound pairs");
  sweep_cmd->add_option("--ratios", ratios, "comma list of country 2 pool sizes");

  auto* report = app.add_subcommand("report", "re-render plots and tables from CSV output");
  std::optional<std::string> report_runs, report_stages;
  std::string report_out = ".";
  report->add_option("--runs", report_runs, "run_report.csv");
  report->add_option("--stages", report_stages, "stage_report.csv");
  report->add_option("--out", report_out, "output directory");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      for (const CLI::App* sub : app.get_subcommands()) err << sub->help();
      return kConfigError;
    }
    if (gen->parsed()) return cmd_gen(gen_spec, gen_seed, gen_pairs, gen_altruists, gen_incompatible, gen_out, out, err);
    if (solve_cmd->parsed()) return cmd_solve(sf, out);
    if (sim->parsed()) return cmd_simulate(sim_flags, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, grid, ratios, out, err);
    if (report->parsed()) return cmd_report(report_runs, report_stages, report_out, out);
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const TimedOut& e) {
    err << "timeout: " << e.what() << '\n';
    return kTimeout;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace kep::cli
