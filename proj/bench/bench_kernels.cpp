// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "imitation/analysis.hpp"
#include "imitation/generators.hpp"

using namespace imitation;

namespace {

CrosscheckOptions options(benchmark::State& state) {
  CrosscheckOptions o;
  o.trials = static_cast<std::size_t>(state.range(0));
  return o;
}

void BM_CrosscheckSerial(benchmark::State& state) {
  const auto o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(crosscheck_theorem1_serial(o));
}

void BM_CrosscheckParallel(benchmark::State& state) {
  const auto o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(crosscheck_theorem1(o));
}

// Large random games: exploit_all parallelises over start actions.
void BM_ExploitAllSerial(benchmark::State& state) {
  const auto rel = relative_payoff_game(random_game(7, state.range(0), 20));
  for (auto _ : state) benchmark::DoNotOptimize(exploit_all_serial(rel));
}

void BM_ExploitAllParallel(benchmark::State& state) {
  const auto rel = relative_payoff_game(random_game(7, state.range(0), 20));
  for (auto _ : state) benchmark::DoNotOptimize(exploit_all(rel));
}

// Acyclic beaten-digraph with many starts.
void BM_ExploitAllCournot(benchmark::State& state) {
  const auto rel = relative_payoff_game(generate("cournot_linear").game);
  for (auto _ : state) benchmark::DoNotOptimize(exploit_all(rel));
}

}  // namespace

BENCHMARK(BM_CrosscheckSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrosscheckParallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploitAllSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploitAllParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploitAllCournot)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
