#include "sclink/pump_optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <thread>

#include "sclink/errors.hpp"

namespace sclink {

void SwarmConfig::validate() const {
  if (particle_count < 2) throw ValidationError("swarm: particle_count must be >= 2");
  if (iteration_cap < 0) throw ValidationError("swarm: iteration_cap must be >= 0");
  if (!(inertia > 0.0 && cognitive > 0.0 && social > 0.0)) {
    throw ValidationError("swarm: inertia and coefficients must be positive");
  }
  if (!(velocity_fraction > 0.0)) throw ValidationError("swarm: velocity_fraction must be positive");
  if (threads < 1) throw ValidationError("swarm: threads must be >= 1");
  if (bounds.empty()) throw ValidationError("swarm: no dimensions");
  for (const auto& [lo, hi] : bounds) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
      throw ValidationError("swarm: bounds must be finite with lo < hi");
    }
  }
}

namespace {

void evaluate_all(const std::function<double(std::span<const double>)>& f,
                  const std::vector<std::vector<double>>& x, std::vector<double>& out,
                  int threads) {
  const std::size_t n = x.size();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(x[i]);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = f(x[i]);
  };
  std::vector<std::jthread> pool;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(work);
  work();
}

// Folds a coordinate back into [lo, hi] and flips its velocity on each bounce.
void reflect(double& x, double& v, double lo, double hi) {
  const double width = hi - lo;
  for (int bounce = 0; bounce < 4 && (x < lo || x > hi); ++bounce) {
    if (x < lo) x = lo + (lo - x);
    if (x > hi) x = hi - (x - hi);
    v = -v;
  }
  x = std::clamp(x, lo, hi);
  v = std::clamp(v, -width, width);
}

}  // namespace

SwarmResult particle_swarm(const std::function<double(std::span<const double>)>& fitness,
                           const SwarmConfig& config, const SwarmObserver& observer) {
  config.validate();
  const std::size_t dim = config.bounds.size();
  const auto np = static_cast<std::size_t>(config.particle_count);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> vmax(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    vmax[d] = config.velocity_fraction * (config.bounds[d].second - config.bounds[d].first);
  }

  std::vector<std::vector<double>> x(np, std::vector<double>(dim));
  std::vector<std::vector<double>> v(np, std::vector<double>(dim));
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t d = 0; d < dim; ++d) {
      const auto [lo, hi] = config.bounds[d];
      x[p][d] = lo + (hi - lo) * unit(rng);
      v[p][d] = (2.0 * unit(rng) - 1.0) * vmax[d];
    }
  }

  std::vector<double> fx(np);
  evaluate_all(fitness, x, fx, config.threads);
  SwarmResult result;
  result.evaluations = static_cast<long>(np);
  auto pbest = x;
  auto pbest_f = fx;
  std::size_t g = 0;
  for (std::size_t p = 1; p < np; ++p) {
    if (pbest_f[p] > pbest_f[g]) g = p;
  }
  std::vector<double> gbest = pbest[g];
  double gbest_f = pbest_f[g];
  result.trace.push_back(gbest_f);
  result.trace_best.push_back(gbest);
  if (observer) observer(0, x);

  for (int it = 1; it <= config.iteration_cap; ++it) {
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t d = 0; d < dim; ++d) {
        const double r1 = unit(rng), r2 = unit(rng);
        double vel = config.inertia * v[p][d] +
                     config.cognitive * r1 * (pbest[p][d] - x[p][d]) +
                     config.social * r2 * (gbest[d] - x[p][d]);
        vel = std::clamp(vel, -vmax[d], vmax[d]);
        double pos = x[p][d] + vel;
        reflect(pos, vel, config.bounds[d].first, config.bounds[d].second);
        x[p][d] = pos;
        v[p][d] = vel;
      }
    }
    if (observer) observer(it, x);
    evaluate_all(fitness, x, fx, config.threads);
    result.evaluations += static_cast<long>(np);
    for (std::size_t p = 0; p < np; ++p) {
      if (fx[p] > pbest_f[p]) {
        pbest_f[p] = fx[p];
        pbest[p] = x[p];
      }
      if (fx[p] > gbest_f) {
        gbest_f = fx[p];
        gbest = x[p];
      }
    }
    result.trace.push_back(gbest_f);
    result.trace_best.push_back(gbest);
  }
  result.best = std::move(gbest);
  result.best_fitness = gbest_f;
  return result;
}

SwarmConfig pump_swarm_config(int pump_count, SwarmConfig base) {
  base.bounds.clear();
  for (int k = 0; k < pump_count; ++k) {
    base.bounds.emplace_back(kPumpWindowMinNm, kPumpWindowMaxNm);
    base.bounds.emplace_back(0.0, kMaxPumpPowerMw);
  }
  return base;
}

RamanPumpSet pumps_from_position(std::span<const double> x) {
  if (x.size() % 2 != 0) throw ValidationError("pump position must hold (wavelength, power) pairs");
  RamanPumpSet set;
  for (std::size_t k = 0; k + 1 < x.size(); k += 2) set.pumps.push_back({x[k], x[k + 1]});
  std::stable_sort(set.pumps.begin(), set.pumps.end(),
                   [](const RamanPump& a, const RamanPump& b) {
                     return a.wavelength_nm < b.wavelength_nm;
                   });
  return set;
}

double fitness(const RamanPumpSet& candidate, const LinkEvaluator& evaluator, int n_span) {
  try {
    return evaluator.throughput(candidate, n_span);
  } catch (const SolverError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

PumpOptimum optimize(const LinkEvaluator& search, const LinkEvaluator& reference, int n_span,
                     int pump_count, const SwarmConfig& config) {
  if (pump_count < 0) throw ValidationError("optimize: pump_count must be >= 0");
  PumpOptimum out;
  if (pump_count == 0) {
    out.best_fitness = reference.throughput(RamanPumpSet{}, n_span);
    out.search_fitness = out.best_fitness;
    out.trace = {out.best_fitness};
    out.trace_best = {RamanPumpSet{}};
    return out;
  }
  std::atomic<long> failures{0};
  auto objective = [&](std::span<const double> x) {
    const double f = fitness(pumps_from_position(x), search, n_span);
    if (!std::isfinite(f)) ++failures;
    return f;
  };
  const SwarmResult r = particle_swarm(objective, pump_swarm_config(pump_count, config));
  out.best = pumps_from_position(r.best);
  out.search_fitness = r.best_fitness;
  out.trace = r.trace;
  for (const auto& b : r.trace_best) out.trace_best.push_back(pumps_from_position(b));
  out.evaluations = r.evaluations;
  out.failures = failures.load();
  if (!std::isfinite(r.best_fitness)) {
    throw SolverError("pump search: none of " + std::to_string(r.evaluations) +
                          " candidates converged",
                      std::numeric_limits<double>::infinity());
  }
  out.best_fitness =
      &search == &reference ? r.best_fitness : reference.throughput(out.best, n_span);
  return out;
}

void write_trace_tsv(std::ostream& out, const PumpOptimum& optimum) {
  out << "iteration\tbest_fitness_tbps";
  const std::size_t np = optimum.best.size();
  for (std::size_t k = 0; k < np; ++k) out << "\tpump" << k << "_nm\tpump" << k << "_mw";
  out << "\n" << std::setprecision(10);
  for (std::size_t it = 0; it < optimum.trace.size(); ++it) {
    out << it << "\t" << optimum.trace[it];
    for (const auto& p : optimum.trace_best[it].pumps) {
      out << "\t" << p.wavelength_nm << "\t" << p.power_mw;
    }
    out << "\n";
  }
}

}  // namespace sclink
