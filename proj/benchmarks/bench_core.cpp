#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <utility>

#include "sclink/config.hpp"
#include "sclink/pump_optimizer.hpp"
#include "sclink/quality_model.hpp"
#include "sclink/raman_engine.hpp"
#include "sclink/scenario.hpp"

using namespace sclink;

namespace {

RamanPumpSet four_pumps() {
  return RamanPumpSet{{{1365.0, 200.0}, {1395.0, 180.0}, {1425.0, 160.0}, {1450.0, 120.0}}};
}

const LinkSetup& setup(const std::string& band_set, bool search) {
  static const Config config = Config::load(SCLINK_BENCH_CONFIG);
  static std::map<std::pair<std::string, bool>, LinkSetup> cache;
  auto it = cache.find({band_set, search});
  if (it == cache.end()) {
    it = cache.emplace(std::pair{band_set, search}, make_setup(config, band_set, RunOptions{}, search)).first;
  }
  return it->second;
}

void BM_PropagateScl(benchmark::State& state) {
  const auto grid = build_grid(BandPlan::scl(), 150.0, 140.0, 2.0);
  const auto fiber = default_fiber();
  RamanOptions opts;
  opts.step_km = state.range(0) / 10.0;
  const SpanPropagator prop(grid, fiber, opts);
  const auto pumps = four_pumps();
  for (auto _ : state) benchmark::DoNotOptimize(prop(pumps));
}
BENCHMARK(BM_PropagateScl)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_NliKernel(benchmark::State& state) {
  const auto grid = build_grid(BandPlan::scl(), 150.0, 140.0, 2.0);
  const auto fiber = default_fiber();
  const NliKernel kernel(grid, fiber, NliOptions{});
  const auto integrals = effective_integrals(propagate(grid, fiber, four_pumps()));
  for (auto _ : state) benchmark::DoNotOptimize(kernel(integrals));
}
BENCHMARK(BM_NliKernel)->Unit(benchmark::kMicrosecond);

void BM_SearchFitness(benchmark::State& state) {
  const LinkEvaluator eval(setup(state.range(0) ? "SCL" : "CL", true));
  const auto pumps = four_pumps();
  for (auto _ : state) benchmark::DoNotOptimize(fitness(pumps, eval, 100));
}
BENCHMARK(BM_SearchFitness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ReferenceEvaluate(benchmark::State& state) {
  const LinkEvaluator eval(setup("SCL", false));
  const auto pumps = four_pumps();
  for (auto _ : state) benchmark::DoNotOptimize(eval.evaluate(pumps, 100, 8.0));
}
BENCHMARK(BM_ReferenceEvaluate)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
