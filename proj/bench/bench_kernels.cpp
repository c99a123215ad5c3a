#include <benchmark/benchmark.h>

#include "qtsl/adversaries.hpp"
#include "qtsl/bruteforce.hpp"
#include "qtsl/hellman.hpp"

using namespace qtsl;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_HellmanBuild(benchmark::State& state) {
  Rng rng = make_rng(1);
  const TruthTable H = TruthTable::sample(1 << 16, 1 << 16, rng);
  for (auto _ : state) benchmark::DoNotOptimize(hellman_build(H, 256, 64, 64, 7, exec_of(state)));
  label(state);
}

void BM_HellmanTrials(benchmark::State& state) {
  HellmanExperiment e;
  e.N = 4096;
  e.m = e.t = e.l = 16;
  e.trials = 200;
  for (auto _ : state) benchmark::DoNotOptimize(hellman_success(e, exec_of(state)));
  label(state);
}

void BM_TableEnumeration(benchmark::State& state) {
  RunOptions o;
  o.method = RunOptions::Method::Exact;
  o.max_worlds = 1e7;
  o.exec = exec_of(state);
  const GameSpec g = salt_wrap(prediction_game(4), 8);
  const auto adv = salted_prediction_attack(8, 4, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_multi_instance(g, adv, o));
  label(state);
}

void BM_GroverEnumeration(benchmark::State& state) {
  RunOptions o;
  o.method = RunOptions::Method::Exact;
  o.mode = OracleMode::Compressed;
  o.exec = exec_of(state);
  const GameSpec g = owf_y_game(4, 4);
  const auto adv = iterated_grover_multi(2, 1, 4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(run_multi_instance(g, adv, o));
  label(state);
}

void BM_BruteForce(benchmark::State& state) {
  BruteForceOptions o;
  o.g = 2;
  o.T = 1;
  o.S = 1;
  o.exec = exec_of(state);
  const GameSpec g = salt_wrap(prediction_game(2), 2);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_best(g, o));
  label(state);
}

}  // namespace

BENCHMARK(BM_HellmanBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HellmanTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TableEnumeration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GroverEnumeration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BruteForce)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
