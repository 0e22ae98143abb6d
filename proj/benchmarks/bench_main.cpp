#include <benchmark/benchmark.h>

#include "svlab/config.hpp"
#include "svlab/measures.hpp"
#include "svlab/montecarlo.hpp"
#include "svlab/verifiers.hpp"

namespace {

using namespace svlab;

World coin_world() { return World::coin(Rational(2, 5)); }

Event heads_event() {
  return Event::of_symbols(coin_world().space(), {"H"});
}

void BM_ThresholdCount(benchmark::State& state) {
  ThresholdSchedule sched{Rational(1, 2), Rational(1, 20)};
  std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(sched.count(n));
}
BENCHMARK(BM_ThresholdCount)->Arg(100)->Arg(10000)->Arg(1000000);

// Deep disjunction slots run at alpha / 2^k; past k ~ 1000 the level no
// longer fits in a double and the schedule switches to exact logs.
void BM_ThresholdCountTinyLevel(benchmark::State& state) {
  Rational level(1, 20);
  for (int i = 0; i < state.range(0); ++i) level = level / 2;
  ThresholdSchedule sched{Rational(1, 2), level};
  for (auto _ : state) benchmark::DoNotOptimize(sched.count(5000));
}
BENCHMARK(BM_ThresholdCountTinyLevel)->Arg(40)->Arg(1200);

void BM_CoinSample(benchmark::State& state) {
  World world = coin_world();
  std::int64_t n = state.range(0);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    SampleVector draws = sample(world, n, 7, trial++);
    benchmark::DoNotOptimize(draws.points.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CoinSample)->Arg(1024)->Arg(16384);

void BM_RealLineSample(benchmark::State& state) {
  World world = World::real_line({{Rational(0), Rational(1), {Rational(1, 2)}}},
                                 {{Rational(5), Rational(1, 2)}}, "half-atom");
  std::int64_t n = state.range(0);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    SampleVector draws = sample(world, n, 7, trial++);
    benchmark::DoNotOptimize(draws.points.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RealLineSample)->Arg(1024);

void BM_SubbasicTrial(benchmark::State& state) {
  VerifierFamily family = subbasic_verifier(heads_event(), Rational(1, 2), Rational(1, 20));
  std::int64_t n_max = state.range(0);
  CompiledFamily compiled = CompiledFamily::compile(family, n_max);
  World world = coin_world();
  auto eval = compiled.evaluator();
  std::uint64_t trial = 0;
  for (auto _ : state) {
    SampleVector draws = sample(world, n_max, 11, trial++);
    eval->reset();
    Verdict last;
    for (const Point& p : draws.points) last = eval->step(p);
    benchmark::DoNotOptimize(last);
  }
  state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(BM_SubbasicTrial)->Arg(2048);

void BM_SolverCompile(benchmark::State& state) {
  Partition partition = builtin_partition("bias-3cell");
  VerifierFamily family = solver(partition, Rational(1, 20));
  std::int64_t n_max = state.range(0);
  for (auto _ : state) {
    CompiledFamily compiled = CompiledFamily::compile(family, n_max);
    benchmark::DoNotOptimize(compiled.n_max());
  }
}
BENCHMARK(BM_SolverCompile)->Arg(64)->Arg(512);

void BM_SolverTrials(benchmark::State& state) {
  Partition partition = builtin_partition("bias-3cell");
  TrialPlan plan{.family = solver(partition, Rational(1, 20)),
                 .world = coin_world(),
                 .n_max = state.range(0),
                 .trials = 16,
                 .master_seed = 3};
  for (auto _ : state) {
    TrialReport report = run_trials(plan);
    benchmark::DoNotOptimize(report.tail_any);
  }
  state.SetItemsProcessed(state.iterations() * plan.trials * plan.n_max);
}
BENCHMARK(BM_SolverTrials)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
