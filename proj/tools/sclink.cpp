// Command-line front end: validate configs, run single scenarios, sweep the
// full scenario grid, optimize pumps and dump power profiles.

#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "sclink/config.hpp"
#include "sclink/errors.hpp"
#include "sclink/scenario.hpp"

namespace {

using namespace sclink;

struct Common {
  std::string config_path;
  std::string out_dir = "sclink-out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool no_format_correction = false;
  bool fast_raman = false;
  bool no_cache = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool outputs) {
  cmd->add_option("--config", c.config_path, "Scenario configuration file")->required();
  if (outputs) cmd->add_option("--out-dir", c.out_dir, "Directory for report files");
  cmd->add_option("--seed", c.seed, "Pump search seed (overrides pso.seed)")
      ->each([&c](const std::string&) { c.seed_set = true; });
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-format-correction", c.no_format_correction,
                "Use the plain Gaussian NLI estimate");
  cmd->add_flag("--fast-raman", c.fast_raman,
                "Triangular Raman profile for signal-signal scattering");
  cmd->add_flag("--no-cache", c.no_cache, "Do not read or write cached pump optima");
  cmd->add_flag("-q,--quiet", c.quiet, "Suppress progress messages");
}

RunOptions run_options(const Common& c, const Config& config) {
  RunOptions o;
  if (c.seed_set) o.seed = c.seed;
  if (c.threads > 0) o.threads = c.threads;
  o.no_format_correction = c.no_format_correction;
  o.fast_raman = c.fast_raman;
  o.cache_enabled = !c.no_cache;
  if (!config.has("cache.dir")) o.cache_dir = (std::filesystem::path(c.out_dir) / "cache").string();
  o.log = c.quiet ? nullptr : &std::cerr;
  return o;
}

struct Link {
  std::string band_set;
  int spans;
  int pump_count;
  double p_mm_w;
  std::optional<RamanPumpSet> pumps;
};

Link link_of(const Config& config) {
  Link l{config.text("link.band_set", "SCL"), config.integer("link.spans", 1),
         config.integer("link.pump_count", 0), config.number("ledger.p_mm_w", 8.0),
         configured_pumps(config)};
  if (l.spans < 1) throw ValidationError("config key 'link.spans': must be >= 1");
  if (l.pump_count < 0) throw ValidationError("config key 'link.pump_count': must be >= 0");
  if (l.pumps) l.pump_count = static_cast<int>(l.pumps->size());
  return l;
}

int cmd_validate(const Common& c) {
  const Config config = Config::load(c.config_path);
  const RunOptions options = run_options(c, config);
  const Link link = link_of(config);
  std::set<std::string> band_sets{link.band_set};
  if (!config.keys_with_prefix("sweep.").empty()) {
    const SweepSpec spec = make_sweep_spec(config);
    band_sets.insert(spec.band_sets.begin(), spec.band_sets.end());
  }
  pump_swarm_config(std::max(1, link.pump_count), make_swarm_config(config, options)).validate();
  for (const auto& bs : band_sets) {
    const LinkSetup setup = make_setup(config, bs, options);
    const ChannelGrid grid = build_grid(setup.plan, setup.spacing_ghz, setup.symbol_rate_gbd,
                                        setup.launch_power_dbm);
    std::cout << bs << ": " << grid.size() << " channels";
    for (Band b : grid.bands()) std::cout << " " << band_name(b) << "=" << grid.count(b);
    std::cout << "\n";
  }
  std::cout << "config OK\n";
  return 0;
}

ScenarioResult run_link(ScenarioEngine& engine, const Link& link) {
  return link.pumps ? engine.run_with_pumps(link.band_set, link.spans, *link.pumps, link.p_mm_w)
                    : engine.run(link.band_set, link.spans, link.pump_count, link.p_mm_w);
}

int cmd_run(const Common& c) {
  const Config config = Config::load(c.config_path);
  const Link link = link_of(config);
  ScenarioEngine engine(config, run_options(c, config));
  const ScenarioResult r = run_link(engine, link);
  write_scenario_reports(c.out_dir, r);
  write_summary_tsv(std::cout, {r});
  for (const auto& w : r.evaluation.span.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int cmd_sweep(const Common& c) {
  const Config config = Config::load(c.config_path);
  const RunOptions options = run_options(c, config);
  const SweepSpec spec = make_sweep_spec(config);
  ScenarioEngine engine(config, options);
  const int threads = options.threads.value_or(1);
  const auto rows = run_sweep(engine, spec, threads);
  std::ostringstream out;
  write_sweep_tsv(out, rows);
  const auto path = (std::filesystem::path(c.out_dir) / "sweep.tsv").string();
  write_file_atomic(path, out.str());
  if (!c.quiet) {
    std::cerr << spec.scenario_count() << " scenarios, " << rows.size() << " rows -> " << path
              << "\n";
  }
  return 0;
}

int cmd_optimize(const Common& c) {
  const Config config = Config::load(c.config_path);
  const Link link = link_of(config);
  ScenarioEngine engine(config, run_options(c, config));
  const PumpOptimum o = engine.optimum(link.band_set, link.spans, link.pump_count);
  std::ostringstream trace;
  trace << "# schema = " << kReportSchema << "\n";
  write_trace_tsv(trace, o);
  const std::string id = scenario_id(link.band_set, link.spans, link.pump_count, link.p_mm_w);
  write_file_atomic((std::filesystem::path(c.out_dir) / ("trace_" + id + ".tsv")).string(),
                    trace.str());
  std::cout << "best_fitness_tbps\t" << o.best_fitness << "\n";
  std::cout << "pumps\t" << format_pumps(o.best) << "\n";
  return 0;
}

int cmd_dump_profile(const Common& c) {
  const Config config = Config::load(c.config_path);
  const Link link = link_of(config);
  ScenarioEngine engine(config, run_options(c, config));
  const RamanPumpSet pumps =
      link.pumps ? *link.pumps : engine.optimum(link.band_set, link.spans, link.pump_count).best;
  const PowerProfile profile = engine.reference(link.band_set).span(pumps).profile;
  std::ostringstream out;
  out << "# schema = " << kReportSchema << "\n# pumps = " << format_pumps(pumps) << "\n";
  write_profile_tsv(out, profile);
  const std::string id = scenario_id(link.band_set, link.spans, link.pump_count, link.p_mm_w);
  const auto path = (std::filesystem::path(c.out_dir) / ("profile_" + id + ".tsv")).string();
  write_file_atomic(path, out.str());
  if (!c.quiet) std::cerr << "profile -> " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid Raman / lumped multi-band link power and throughput simulator"};
  app.require_subcommand(1);
  Common common;
  struct Command {
    const char* name;
    const char* help;
    bool outputs;
    int (*fn)(const Common&);
  };
  const Command commands[] = {
      {"validate", "Check a configuration and its data files", false, cmd_validate},
      {"run", "Evaluate the configured link and write reports", true, cmd_run},
      {"sweep", "Run the band set x spans x pumps x P_mm grid", true, cmd_sweep},
      {"optimize", "Search pump wavelengths and powers", true, cmd_optimize},
      {"dump-profile", "Write the span power profile", true, cmd_dump_profile},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, common, cmd.outputs);
    subs.emplace_back(sub, &cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->fn(common);
    }
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
