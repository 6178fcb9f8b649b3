#include "sclink/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "sclink/errors.hpp"
#include "sclink/tsv.hpp"
#include "sclink/units.hpp"

namespace sclink {

namespace fs = std::filesystem;

namespace {

std::vector<Band> bands_of(const std::string& band_set) {
  if (band_set == "CL") return {Band::C, Band::L};
  if (band_set == "SCL") return {Band::S, Band::C, Band::L};
  throw ValidationError("unknown band set '" + band_set + "' (expected CL or SCL)");
}

BandWindow default_window(Band b) {
  switch (b) {
    case Band::S: return {Band::S, 1460.0, 1530.0, 54};
    case Band::C: return {Band::C, 1530.0, 1565.0, std::nullopt};
    case Band::L: return {Band::L, 1565.0, 1620.0, std::nullopt};
  }
  throw ValidationError("invalid band");
}

std::string band_key(Band b, const char* field) {
  return "band." + std::string(band_name(b)) + "." + field;
}

PiecewiseLinear load_table(const std::string& path, const std::string& x_col,
                           const std::string& y_col) {
  const TsvTable t = read_tsv_file(path);
  const int xc = t.column(x_col), yc = t.column(y_col);
  if (xc < 0 || yc < 0) {
    throw ValidationError(path + ": expected columns '" + x_col + "' and '" + y_col + "'");
  }
  std::vector<double> xs, ys;
  for (const auto& row : t.rows) {
    xs.push_back(row[static_cast<std::size_t>(xc)]);
    ys.push_back(row[static_cast<std::size_t>(yc)]);
  }
  try {
    return PiecewiseLinear(std::move(xs), std::move(ys));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string file_contents(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

bool affects_optimum(const std::string& key) {
  if (key.rfind("fiber.", 0) == 0 || key.rfind("grid.", 0) == 0 ||
      key.rfind("raman.", 0) == 0 || key.rfind("quality.", 0) == 0) {
    return true;
  }
  if (key.rfind("pso.", 0) == 0) return key != "pso.threads" && key != "pso.seed";
  if (key.rfind("band.", 0) == 0) return key.find(".efficiency_curve") == std::string::npos;
  return false;
}

}  // namespace

void SweepSpec::validate() const {
  if (band_sets.empty() || spans.empty() || pump_counts.empty() || p_mm_w.empty()) {
    throw ValidationError("sweep: every list must be non-empty");
  }
  for (const auto& b : band_sets) bands_of(b);
  for (int s : spans) {
    if (s < 1) throw ValidationError("sweep.spans: span counts must be >= 1");
  }
  for (int p : pump_counts) {
    if (p < 0 || p > 8) throw ValidationError("sweep.pumps: pump counts must lie in [0, 8]");
  }
  for (double p : p_mm_w) {
    if (!(p >= 0.0)) throw ValidationError("sweep.p_mm_w: management power must be >= 0");
  }
}

std::size_t SweepSpec::scenario_count() const {
  return band_sets.size() * spans.size() * pump_counts.size() * p_mm_w.size();
}

BandPlan make_plan(const Config& config, const std::string& band_set) {
  BandPlan plan;
  const auto bands = bands_of(band_set);
  for (std::size_t k = 0; k < bands.size(); ++k) {
    BandWindow w = default_window(bands[k]);
    const std::string range_key = band_key(bands[k], "range_nm");
    if (config.has(range_key)) {
      const auto r = config.numbers(range_key, {});
      if (r.size() != 2) throw ValidationError("config key '" + range_key + "': expected 'min, max'");
      w.min_wavelength_nm = r[0];
      w.max_wavelength_nm = r[1];
    }
    // A pinned count only applies to the shortest-wavelength band of the set.
    const std::string count_key = band_key(bands[k], "channel_count");
    if (k != 0) {
      w.channel_count.reset();
    } else if (config.has(count_key)) {
      w.channel_count = config.integer(count_key, 0);
    }
    plan.bands.push_back(w);
  }
  try {
    plan.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("band plan for ") + band_set + ": " + e.what());
  }
  return plan;
}

std::optional<RamanPumpSet> configured_pumps(const Config& config) {
  if (!config.has("pumps.list")) return std::nullopt;
  RamanPumpSet set;
  for (const auto& item : config.list("pumps.list")) {
    const auto colon = item.find(':');
    char* end = nullptr;
    if (colon == std::string::npos) {
      throw ValidationError("config key 'pumps.list': '" + item + "' is not wavelength_nm:power_mw");
    }
    const std::string wl = item.substr(0, colon), pw = item.substr(colon + 1);
    const double w = std::strtod(wl.c_str(), &end);
    const bool ok_w = !wl.empty() && *end == '\0';
    const double p = std::strtod(pw.c_str(), &end);
    if (!ok_w || pw.empty() || *end != '\0') {
      throw ValidationError("config key 'pumps.list': '" + item + "' is not wavelength_nm:power_mw");
    }
    set.pumps.push_back({w, p});
  }
  try {
    set.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config key 'pumps.list': ") + e.what());
  }
  return set;
}

LinkSetup make_setup(const Config& config, const std::string& band_set, const RunOptions& options,
                     bool search) {
  LinkSetup s;
  s.band_set = band_set;
  s.plan = make_plan(config, band_set);
  s.spacing_ghz = config.number("grid.spacing_ghz", 150.0);
  s.symbol_rate_gbd = config.number("grid.symbol_rate_gbd", 140.0);
  s.launch_power_dbm = config.number("grid.launch_power_dbm", 2.0);

  FiberSpec& f = s.fiber;
  f.length_km = config.number("fiber.length_km", f.length_km);
  f.dispersion_ps_nm_km = config.number("fiber.dispersion_ps_nm_km", f.dispersion_ps_nm_km);
  f.reference_wavelength_nm =
      config.number("fiber.reference_wavelength_nm", f.reference_wavelength_nm);
  f.gamma_per_w_km = config.number("fiber.gamma_per_w_km", f.gamma_per_w_km);
  f.temperature_k = config.number("fiber.temperature_k", f.temperature_k);
  if (auto p = config.path("fiber.attenuation_table")) {
    f.attenuation_db_per_km = load_table(*p, "wavelength_nm", "attenuation_db_per_km");
  }
  if (auto p = config.path("fiber.raman_table")) {
    f.raman_gain_per_w_km = load_table(*p, "shift_thz", "gain_per_w_km");
  }
  f.validate();

  const std::map<Band, double> default_nf{{Band::S, 6.0}, {Band::C, 5.0}, {Band::L, 6.0}};
  s.noise_figure_db.clear();
  for (const auto& w : s.plan.bands) {
    s.noise_figure_db[w.label] =
        config.number(band_key(w.label, "noise_figure_db"), default_nf.at(w.label));
    const std::string curve_key = band_key(w.label, "efficiency_curve");
    const auto path = config.path(curve_key);
    if (!path) throw ValidationError("missing config key '" + curve_key + "'");
    EfficiencyCurve curve = load_efficiency_curve(*path);
    if (curve.band() != w.label) {
      throw ValidationError("config key '" + curve_key + "': file is labelled for band " +
                            std::string(band_name(curve.band())));
    }
    s.efficiency.emplace(w.label, std::move(curve));
  }

  const std::string model = config.text("pumps.power_model", "measured");
  if (model == "measured") {
    s.raman_power_model = RamanPowerModel::measured;
  } else if (model == "constant") {
    s.raman_power_model = RamanPowerModel::constant;
  } else {
    throw ValidationError("config key 'pumps.power_model': expected 'measured' or 'constant'");
  }
  s.raman_efficiency = config.number("pumps.efficiency", s.raman_efficiency);
  for (const auto& key : config.keys_with_prefix("pumps.draw_curve.")) {
    s.pump_draw.add(std::stod(key.substr(17)), load_pump_draw_curve(*config.path(key)));
  }

  const std::string point = config.text("ledger.efficiency_point", "saturation");
  if (point == "saturation") {
    s.operating_point = EfficiencyOperatingPoint::saturation;
  } else if (point == "band_output") {
    s.operating_point = EfficiencyOperatingPoint::band_output;
  } else {
    throw ValidationError(
        "config key 'ledger.efficiency_point': expected 'saturation' or 'band_output'");
  }

  RamanOptions& r = s.raman;
  r.step_km = search ? config.number("raman.search_step_km", 2.0)
                     : config.number("raman.step_km", r.step_km);
  r.tolerance = search ? config.number("raman.search_tolerance", 1e-5)
                       : config.number("raman.tolerance", r.tolerance);
  r.damping = config.number("raman.damping", r.damping);
  r.acceleration_depth = config.integer("raman.acceleration_depth", r.acceleration_depth);
  r.max_iterations = config.integer("raman.max_iterations", r.max_iterations);
  r.pump_depletion = config.boolean("raman.pump_depletion", r.pump_depletion);
  r.pump_interactions = config.boolean("raman.pump_interactions", r.pump_interactions);
  if (config.boolean("raman.fast", false) || options.fast_raman) {
    r.signal_profile = RamanProfileMode::triangular;
  }

  s.transceiver_snr_db = config.number("quality.transceiver_snr_db", s.transceiver_snr_db);
  s.nli.format_correction =
      config.boolean("quality.format_correction", true) && !options.no_format_correction;
  s.nli.format_correction_weight =
      config.number("quality.format_correction_weight", s.nli.format_correction_weight);
  const int order = config.integer("quality.modulation_order", 64);
  s.nli.excess_kurtosis = excess_kurtosis(qam_constellation(order));

  s.validate();
  return s;
}

SwarmConfig make_swarm_config(const Config& config, const RunOptions& options) {
  SwarmConfig c;
  c.particle_count = config.integer("pso.particles", c.particle_count);
  c.iteration_cap = config.integer("pso.iterations", c.iteration_cap);
  c.inertia = config.number("pso.inertia", c.inertia);
  c.cognitive = config.number("pso.cognitive", c.cognitive);
  c.social = config.number("pso.social", c.social);
  c.velocity_fraction = config.number("pso.velocity_fraction", c.velocity_fraction);
  c.seed = static_cast<std::uint64_t>(config.number("pso.seed", 1.0));
  if (options.seed) c.seed = *options.seed;
  c.threads = options.threads ? *options.threads : config.integer("pso.threads", 1);
  return c;
}

SweepSpec make_sweep_spec(const Config& config) {
  SweepSpec spec;
  if (config.has("sweep.band_sets")) spec.band_sets = config.list("sweep.band_sets");
  if (config.has("sweep.spans")) {
    spec.spans.clear();
    for (double v : config.numbers("sweep.spans", {})) spec.spans.push_back(static_cast<int>(v));
  }
  if (config.has("sweep.pumps")) {
    spec.pump_counts.clear();
    for (double v : config.numbers("sweep.pumps", {})) {
      spec.pump_counts.push_back(static_cast<int>(v));
    }
  }
  spec.p_mm_w = config.numbers("sweep.p_mm_w", spec.p_mm_w);
  spec.validate();
  return spec;
}

std::string scenario_id(const std::string& band_set, int spans, int pump_count, double p_mm_w) {
  std::ostringstream id;
  id << band_set << "_" << spans << "span_" << pump_count << "pump_pmm" << p_mm_w;
  return id.str();
}

std::string format_pumps(const RamanPumpSet& pumps) {
  if (pumps.empty()) return "none";
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  for (std::size_t k = 0; k < pumps.size(); ++k) {
    if (k) out << ";";
    out << pumps.pumps[k].wavelength_nm << "nm:" << pumps.pumps[k].power_mw << "mW";
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp" << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const fs::path tmp = target.string() + suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ValidationError("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::optional<PumpOptimum> PsoCache::load(const std::string& key) const {
  std::ifstream in(fs::path(dir_) / (key + ".tsv"));
  if (!in) return std::nullopt;
  PumpOptimum o;
  std::string line;
  bool complete = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "best_fitness") {
      ss >> o.best_fitness;
    } else if (tag == "search_fitness") {
      ss >> o.search_fitness;
    } else if (tag == "evaluations") {
      ss >> o.evaluations;
    } else if (tag == "failures") {
      ss >> o.failures;
    } else if (tag == "pump") {
      RamanPump p{};
      ss >> p.wavelength_nm >> p.power_mw;
      o.best.pumps.push_back(p);
    } else if (tag == "trace") {
      double f = 0.0;
      ss >> f;
      RamanPumpSet best;
      RamanPump p{};
      while (ss >> p.wavelength_nm >> p.power_mw) best.pumps.push_back(p);
      o.trace.push_back(f);
      o.trace_best.push_back(std::move(best));
    } else if (tag == "end") {
      complete = true;
    }
    if (ss.fail() && !ss.eof()) return std::nullopt;
  }
  if (!complete) return std::nullopt;
  return o;
}

void PsoCache::store(const std::string& key, const PumpOptimum& o) const {
  std::ostringstream out;
  out << "# sclink pump optimum cache 1\n" << std::setprecision(17);
  out << "best_fitness\t" << o.best_fitness << "\n";
  out << "search_fitness\t" << o.search_fitness << "\n";
  out << "evaluations\t" << o.evaluations << "\n";
  out << "failures\t" << o.failures << "\n";
  for (const auto& p : o.best.pumps) out << "pump\t" << p.wavelength_nm << "\t" << p.power_mw << "\n";
  for (std::size_t i = 0; i < o.trace.size(); ++i) {
    out << "trace\t" << o.trace[i];
    for (const auto& p : o.trace_best[i].pumps) out << "\t" << p.wavelength_nm << "\t" << p.power_mw;
    out << "\n";
  }
  out << "end\n";
  write_file_atomic((fs::path(dir_) / (key + ".tsv")).string(), out.str());
}

ScenarioEngine::ScenarioEngine(Config config, RunOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
  std::ostringstream fp;
  fp << "optimum-v1\n";
  std::istringstream canon(config_.canonical());
  std::string line;
  while (std::getline(canon, line)) {
    const std::string key = line.substr(0, line.find('='));
    if (affects_optimum(key)) fp << line << "\n";
  }
  for (const char* key : {"fiber.attenuation_table", "fiber.raman_table"}) {
    if (auto p = config_.path(key)) fp << key << "#" << fnv1a64(file_contents(*p)) << "\n";
  }
  fp << "no_format_correction=" << options_.no_format_correction << "\n";
  fp << "fast_raman=" << options_.fast_raman << "\n";
  fingerprint_ = fp.str();

  std::optional<std::string> dir = options_.cache_dir;
  if (!dir) dir = config_.path("cache.dir");
  if (options_.cache_enabled && config_.boolean("cache.enabled", true) && dir) cache_.emplace(*dir);
}

ScenarioEngine::Evaluators& ScenarioEngine::evaluators(const std::string& band_set) {
  std::lock_guard lock(mutex_);
  auto it = evaluators_.find(band_set);
  if (it != evaluators_.end()) return it->second;
  Evaluators e;
  e.reference = std::make_unique<LinkEvaluator>(make_setup(config_, band_set, options_, false));
  e.search = std::make_unique<LinkEvaluator>(make_setup(config_, band_set, options_, true));
  return evaluators_.emplace(band_set, std::move(e)).first->second;
}

const LinkEvaluator& ScenarioEngine::reference(const std::string& band_set) {
  return *evaluators(band_set).reference;
}

const LinkEvaluator& ScenarioEngine::search(const std::string& band_set) {
  return *evaluators(band_set).search;
}

std::string ScenarioEngine::cache_key(const std::string& band_set, int spans,
                                      int pump_count) const {
  const SwarmConfig swarm = make_swarm_config(config_, options_);
  std::ostringstream key;
  key << fingerprint_ << "seed=" << swarm.seed << "\nband_set=" << band_set
      << "\nspans=" << spans << "\npumps=" << pump_count << "\n";
  return band_set + "_" + std::to_string(spans) + "span_" + std::to_string(pump_count) + "pump_" +
         hex64(fnv1a64(key.str()));
}

PumpOptimum ScenarioEngine::optimum(const std::string& band_set, int spans, int pump_count,
                                    bool* from_cache) {
  if (from_cache) *from_cache = false;
  auto& ev = evaluators(band_set);
  if (pump_count == 0) return optimize(*ev.search, *ev.reference, spans, 0, SwarmConfig{});
  const std::string key = cache_key(band_set, spans, pump_count);
  if (cache_) {
    if (auto hit = cache_->load(key); hit && hit->best.size() == static_cast<std::size_t>(pump_count)) {
      if (from_cache) *from_cache = true;
      return *hit;
    }
  }
  const auto start = std::chrono::steady_clock::now();
  PumpOptimum o =
      optimize(*ev.search, *ev.reference, spans, pump_count, make_swarm_config(config_, options_));
  if (options_.log) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream msg;
    msg << "optimized " << band_set << " " << spans << " span(s) " << pump_count << " pump(s): "
        << std::fixed << std::setprecision(3) << o.best_fitness << " Tb/s in "
        << std::setprecision(1) << secs << " s\n";
    *options_.log << msg.str() << std::flush;
  }
  if (cache_) cache_->store(key, o);
  return o;
}

ScenarioResult ScenarioEngine::run_with_pumps(const std::string& band_set, int spans,
                                              const RamanPumpSet& pumps, double p_mm_w) {
  ScenarioResult r;
  r.band_set = band_set;
  r.spans = spans;
  r.pump_count = static_cast<int>(pumps.size());
  r.p_mm_w = p_mm_w;
  r.id = scenario_id(band_set, spans, r.pump_count, p_mm_w);
  r.pumps = pumps;
  r.evaluation = reference(band_set).evaluate(pumps, spans, p_mm_w);
  return r;
}

ScenarioResult ScenarioEngine::run(const std::string& band_set, int spans, int pump_count,
                                   double p_mm_w) {
  bool cached = false;
  const PumpOptimum o = optimum(band_set, spans, pump_count, &cached);
  ScenarioResult r = run_with_pumps(band_set, spans, o.best, p_mm_w);
  r.pump_count = pump_count;
  r.id = scenario_id(band_set, spans, pump_count, p_mm_w);
  r.from_cache = cached;
  return r;
}

namespace {

struct Job {
  std::string band_set;
  int spans;
  int pumps;
  RamanPumpSet best;
  SpanResult span;
  std::exception_ptr error;
};

}  // namespace

std::vector<SweepRow> run_sweep(ScenarioEngine& engine, const SweepSpec& spec, int threads) {
  spec.validate();
  std::set<int> pump_counts(spec.pump_counts.begin(), spec.pump_counts.end());
  pump_counts.insert(0);  // baseline for the percent-change column
  std::vector<Job> jobs;
  for (const auto& bs : spec.band_sets) {
    engine.reference(bs);
    engine.search(bs);
    for (int s : spec.spans) {
      for (int p : pump_counts) jobs.push_back(Job{bs, s, p, {}, {}, nullptr});
    }
  }
  // Most expensive searches first so workers finish together.
  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto cost = [&](const Job& j) {
      return static_cast<double>(j.pumps) * (j.band_set == "SCL" ? 2.0 : 1.0);
    };
    return cost(jobs[a]) > cost(jobs[b]);
  });
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n < order.size(); n = next++) {
      Job& j = jobs[order[n]];
      try {
        j.best = engine.optimum(j.band_set, j.spans, j.pumps).best;
        j.span = engine.reference(j.band_set).span(j.best);
      } catch (...) {
        j.error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < std::max(threads, 1); ++t) pool.emplace_back(worker);
    worker();
  }
  for (const Job& j : jobs) {
    if (!j.error) continue;
    // The pump search does not depend on P_mm, so the id omits it.
    const std::string id = j.band_set + "_" + std::to_string(j.spans) + "span_" +
                           std::to_string(j.pumps) + "pump";
    try {
      std::rethrow_exception(j.error);
    } catch (const SolverError& e) {
      throw SolverError("scenario " + id + ": " + e.what(), e.residual());
    } catch (const ValidationError& e) {
      throw ValidationError("scenario " + id + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("scenario " + id + ": " + e.what());
    }
  }
  auto find_job = [&](const std::string& bs, int s, int p) -> const Job& {
    for (const Job& j : jobs) {
      if (j.band_set == bs && j.spans == s && j.pumps == p) return j;
    }
    throw ValidationError("sweep: missing job");
  };

  std::vector<SweepRow> rows;
  std::map<std::string, double> baseline;  // (bs, spans, p_mm, band) -> energy per bit
  auto base_key = [](const std::string& bs, int s, double pmm, const std::string& band) {
    std::ostringstream k;
    k << bs << "|" << s << "|" << std::setprecision(17) << pmm << "|" << band;
    return k.str();
  };
  auto make_rows = [&](const std::string& bs, int s, int p, double pmm) {
    const Job& j = find_job(bs, s, p);
    const LinkEvaluation e = engine.reference(bs).evaluate(j.best, j.span, s, pmm);
    std::vector<SweepRow> out;
    const double n = static_cast<double>(s);
    const std::string id = scenario_id(bs, s, p, pmm);
    SweepRow total{id, bs, s, p, pmm, "total", 0, 0, 0, 0, 0, 0, 0, 0, format_pumps(j.best)};
    for (const auto& [band, b] : e.ledger.bands) {
      SweepRow r = total;
      r.band = std::string(band_name(band));
      r.throughput_tbps = b.throughput_tbps;
      r.lumped_w = n * b.lumped_w;
      r.dra_w = n * b.dra_w;
      r.mm_w = n * b.mm_w;
      r.power_w = b.link_w;
      r.energy_pj_per_bit = energy_per_bit(r.power_w, r.throughput_tbps);
      total.lumped_w += r.lumped_w;
      total.dra_w += r.dra_w;
      total.mm_w += r.mm_w;
      out.push_back(r);
    }
    total.throughput_tbps = e.ledger.throughput_tbps;
    total.power_w = e.ledger.total_w;
    total.energy_pj_per_bit = energy_per_bit(total.power_w, total.throughput_tbps);
    out.push_back(total);
    return out;
  };
  for (const auto& bs : spec.band_sets) {
    for (int s : spec.spans) {
      for (double pmm : spec.p_mm_w) {
        for (const auto& r : make_rows(bs, s, 0, pmm)) {
          baseline[base_key(bs, s, pmm, r.band)] = r.energy_pj_per_bit;
        }
        for (int p : spec.pump_counts) {
          for (auto r : make_rows(bs, s, p, pmm)) {
            const double e0 = baseline.at(base_key(bs, s, pmm, r.band));
            r.energy_change_pct = p == 0 ? 0.0 : 100.0 * (r.energy_pj_per_bit - e0) / e0;
            rows.push_back(std::move(r));
          }
        }
      }
    }
  }
  std::map<std::string, double> largest;  // (spans, p_mm) -> max total power
  auto norm_key = [](int s, double pmm) {
    std::ostringstream k;
    k << s << "|" << std::setprecision(17) << pmm;
    return k.str();
  };
  for (const auto& r : rows) {
    if (r.band != "total") continue;
    double& m = largest[norm_key(r.spans, r.p_mm_w)];
    m = std::max(m, r.power_w);
  }
  for (auto& r : rows) r.normalized_power = r.power_w / largest.at(norm_key(r.spans, r.p_mm_w));
  return rows;
}

void write_sweep_tsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "# schema = " << kReportSchema << "\n";
  out << "scenario\tband_set\tspans\tpumps\tp_mm_w\tband\tthroughput_tbps\tlumped_w\tdra_w\tmm_w\t"
         "power_w\tenergy_pj_per_bit\tenergy_change_pct\tnormalized_power\tpump_config\n";
  out << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.scenario << "\t" << r.band_set << "\t" << r.spans << "\t" << r.pump_count << "\t"
        << r.p_mm_w << "\t" << r.band << "\t" << r.throughput_tbps << "\t" << r.lumped_w << "\t"
        << r.dra_w << "\t" << r.mm_w << "\t" << r.power_w << "\t" << r.energy_pj_per_bit << "\t"
        << r.energy_change_pct << "\t" << r.normalized_power << "\t" << r.pumps << "\n";
  }
}

void write_summary_tsv(std::ostream& out, const std::vector<ScenarioResult>& results) {
  out << "# schema = " << kReportSchema << "\n";
  out << "scenario\tband_set\tspans\tpumps\tp_mm_w\tchannels";
  for (Band b : kAllBands) {
    const std::string n(band_name(b));
    out << "\t" << n << "_throughput_tbps\t" << n << "_lumped_w\t" << n << "_dra_w\t" << n
        << "_power_w\t" << n << "_energy_pj_per_bit";
  }
  out << "\ttotal_throughput_tbps\ttotal_power_w\ttotal_energy_pj_per_bit\tpump_config\n";
  out << std::setprecision(10);
  for (const auto& r : results) {
    const auto& e = r.evaluation;
    out << r.id << "\t" << r.band_set << "\t" << r.spans << "\t" << r.pump_count << "\t" << r.p_mm_w
        << "\t" << e.scenario.grid.size();
    for (Band b : kAllBands) {
      const auto it = e.ledger.bands.find(b);
      if (it == e.ledger.bands.end()) {
        out << "\tNA\tNA\tNA\tNA\tNA";
        continue;
      }
      const double n = static_cast<double>(r.spans);
      out << "\t" << it->second.throughput_tbps << "\t" << n * it->second.lumped_w << "\t"
          << n * it->second.dra_w << "\t" << it->second.link_w << "\t"
          << it->second.energy_pj_per_bit;
    }
    out << "\t" << e.ledger.throughput_tbps << "\t" << e.ledger.total_w << "\t"
        << e.ledger.energy_pj_per_bit << "\t" << format_pumps(r.pumps) << "\n";
  }
}

void write_scenario_reports(const std::string& dir, const ScenarioResult& result) {
  const fs::path base(dir);
  {
    std::ostringstream q;
    q << "# schema = " << kReportSchema << "\n# scenario = " << result.id << "\n";
    write_quality_tsv(q, result.evaluation.quality);
    write_file_atomic((base / ("quality_" + result.id + ".tsv")).string(), q.str());
  }
  {
    std::ostringstream l;
    l << "# schema = " << kReportSchema << "\n";
    write_ledger_tsv(l, result.id, result.evaluation.ledger);
    write_file_atomic((base / ("ledger_" + result.id + ".tsv")).string(), l.str());
  }
  {
    std::ostringstream s;
    write_summary_tsv(s, {result});
    write_file_atomic((base / ("summary_" + result.id + ".tsv")).string(), s.str());
  }
}

}  // namespace sclink
