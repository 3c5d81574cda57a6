#include "levi/experiments.hpp"

#include <benchmark/benchmark.h>

using namespace levi;

static void BM_ConditionII(benchmark::State& state) {
  const MapJet2 jet = zexpr::CompiledMap(gallery_entry("violator").spec).jet(CVec::Zero(2));
  Rng rng = substream(0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(condition_ii_residual(jet, 16, rng));
}
BENCHMARK(BM_ConditionII);

static void BM_Counterexample(benchmark::State& state) {
  const auto& spec = gallery_entry("violator").spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_counterexample(spec, CVec::Zero(2), CVec::Unit(2, 1)));
  }
}
BENCHMARK(BM_Counterexample);

static void BM_Verify(benchmark::State& state) {
  const auto entry = gallery_entry("violator");
  VerifyConfig config;
  config.budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_theorem_equivalence(entry.spec, entry.name, config));
  }
}
BENCHMARK(BM_Verify)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Lemma33Suite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lemma33_suite({}));
}
BENCHMARK(BM_Lemma33Suite)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
