#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "sclink/evaluation.hpp"
#include "sclink/raman_engine.hpp"

namespace sclink {

struct SwarmConfig {
  int particle_count = 30;
  int iteration_cap = 150;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  /// Per-dimension velocity limit as a fraction of the bound width.
  double velocity_fraction = 0.5;
  std::uint64_t seed = 1;
  /// Fitness evaluations of one iteration are spread over this many threads.
  int threads = 1;
  std::vector<std::pair<double, double>> bounds;

  void validate() const;
};

struct SwarmResult {
  std::vector<double> best;
  double best_fitness = 0.0;
  /// Global best after the initial evaluation (index 0) and after each
  /// iteration.
  std::vector<double> trace;
  std::vector<std::vector<double>> trace_best;
  long evaluations = 0;
};

/// Observer called once per iteration with every particle position; used by
/// tests to check the bound invariant.
using SwarmObserver = std::function<void(int iteration, const std::vector<std::vector<double>>&)>;

/// Global-best particle swarm maximizing `fitness` inside box bounds, with
/// velocity clamping and reflection at the walls. The objective must be safe
/// to call concurrently when `threads > 1`; random numbers are drawn only by
/// the calling thread, so results do not depend on the thread count.
SwarmResult particle_swarm(const std::function<double(std::span<const double>)>& fitness,
                           const SwarmConfig& config, const SwarmObserver& observer = {});

/// Swarm settings for a pump search: bounds are (wavelength, power) pairs per
/// pump over the 1350-1460 nm window and 0-250 mW.
SwarmConfig pump_swarm_config(int pump_count, SwarmConfig base = {});

/// Decodes [lambda_0, P_0, lambda_1, P_1, ...] into a pump set sorted by
/// wavelength.
RamanPumpSet pumps_from_position(std::span<const double> x);

/// Total throughput [Tb/s] after `n_span` spans, or -infinity when the Raman
/// solver fails for this candidate.
double fitness(const RamanPumpSet& candidate, const LinkEvaluator& evaluator, int n_span);

struct PumpOptimum {
  RamanPumpSet best;
  double best_fitness = 0.0;    // at the reference evaluator
  double search_fitness = 0.0;  // at the search evaluator
  std::vector<double> trace;
  std::vector<RamanPumpSet> trace_best;
  long evaluations = 0;
  long failures = 0;
};

/// Searches pump wavelengths and powers for maximum throughput with
/// `search`, then re-evaluates the winner with `reference` (which may be the
/// same evaluator). A zero pump count returns the lumped-only result.
PumpOptimum optimize(const LinkEvaluator& search, const LinkEvaluator& reference, int n_span,
                     int pump_count, const SwarmConfig& config);

void write_trace_tsv(std::ostream& out, const PumpOptimum& optimum);

}  // namespace sclink
