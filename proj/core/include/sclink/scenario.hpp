#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sclink/config.hpp"
#include "sclink/evaluation.hpp"
#include "sclink/pump_optimizer.hpp"

namespace sclink {

/// Written as the first comment line of every report table.
inline constexpr const char* kReportSchema = "sclink-report/1";

/// Command-line overrides layered on top of a config file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool no_format_correction = false;
  bool fast_raman = false;
  std::optional<std::string> cache_dir;
  bool cache_enabled = true;
  /// Progress messages; null for silence.
  std::ostream* log = nullptr;
};

struct SweepSpec {
  std::vector<std::string> band_sets{"CL", "SCL"};
  std::vector<int> spans{1, 10, 100};
  std::vector<int> pump_counts{0, 1, 2, 4};
  std::vector<double> p_mm_w{0.0, 2.0, 8.0};

  void validate() const;
  std::size_t scenario_count() const;
};

/// Band plan for "CL" or "SCL" built from the config's `band.*` entries
/// (or the built-in edges when absent).
BandPlan make_plan(const Config& config, const std::string& band_set);

/// Loads curves and applies config keys and overrides. `search` selects the
/// coarser Raman settings used inside the pump search.
LinkSetup make_setup(const Config& config, const std::string& band_set, const RunOptions& options,
                     bool search = false);
SwarmConfig make_swarm_config(const Config& config, const RunOptions& options);
SweepSpec make_sweep_spec(const Config& config);

/// Pumps given explicitly as `pumps.list = 1425:250, 1400:120` (nm:mW).
std::optional<RamanPumpSet> configured_pumps(const Config& config);

/// "SCL_100span_4pump_pmm8".
std::string scenario_id(const std::string& band_set, int spans, int pump_count, double p_mm_w);

/// On-disk store of pump optima, one file per key. Writes are atomic.
class PsoCache {
 public:
  explicit PsoCache(std::string dir) : dir_(std::move(dir)) {}
  std::optional<PumpOptimum> load(const std::string& key) const;
  void store(const std::string& key, const PumpOptimum& optimum) const;
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
};

struct ScenarioResult {
  std::string id;
  std::string band_set;
  int spans = 1;
  int pump_count = 0;
  double p_mm_w = 0.0;
  RamanPumpSet pumps;
  LinkEvaluation evaluation;
  bool from_cache = false;
};

/// Owns evaluators per band set and the optimum cache. Thread-safe.
class ScenarioEngine {
 public:
  ScenarioEngine(Config config, RunOptions options);

  const Config& config() const { return config_; }
  const RunOptions& options() const { return options_; }
  const LinkEvaluator& reference(const std::string& band_set);
  const LinkEvaluator& search(const std::string& band_set);

  /// Cache key: hash of the settings that influence the optimum, plus seed,
  /// band set, span count and pump count.
  std::string cache_key(const std::string& band_set, int spans, int pump_count) const;

  PumpOptimum optimum(const std::string& band_set, int spans, int pump_count,
                      bool* from_cache = nullptr);
  ScenarioResult run(const std::string& band_set, int spans, int pump_count, double p_mm_w);
  ScenarioResult run_with_pumps(const std::string& band_set, int spans, const RamanPumpSet& pumps,
                                double p_mm_w);

 private:
  struct Evaluators {
    std::unique_ptr<LinkEvaluator> reference;
    std::unique_ptr<LinkEvaluator> search;
  };
  Evaluators& evaluators(const std::string& band_set);

  Config config_;
  RunOptions options_;
  std::string fingerprint_;
  std::optional<PsoCache> cache_;
  std::mutex mutex_;
  std::map<std::string, Evaluators> evaluators_;
};

struct SweepRow {
  std::string scenario;
  std::string band_set;
  int spans;
  int pump_count;
  double p_mm_w;
  std::string band;  // "S", "C", "L" or "total"
  double throughput_tbps;
  double lumped_w;  // link totals over all spans
  double dra_w;
  double mm_w;
  double power_w;
  double energy_pj_per_bit;
  double energy_change_pct;  // versus lumped-only with the same band set, spans and P_mm
  double normalized_power;   // power_w / largest total among scenarios with the same spans and P_mm
  std::string pumps;
};

/// Runs every scenario of `spec`. Distinct pump searches run concurrently on
/// up to `threads` workers. Any failure aborts with the scenario id.
std::vector<SweepRow> run_sweep(ScenarioEngine& engine, const SweepSpec& spec, int threads);

void write_sweep_tsv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_summary_tsv(std::ostream& out, const std::vector<ScenarioResult>& results);

/// Writes quality_<id>.tsv, ledger_<id>.tsv and summary_<id>.tsv under `dir`.
void write_scenario_reports(const std::string& dir, const ScenarioResult& result);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string format_pumps(const RamanPumpSet& pumps);

}  // namespace sclink
