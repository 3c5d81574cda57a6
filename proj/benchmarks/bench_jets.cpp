#include "levi/wirtinger.hpp"
#include "levi/zexpr.hpp"

#include <benchmark/benchmark.h>

using namespace levi;

namespace {

const std::vector<std::string> kMap{"z1 + z2*conj(z2) + 0.3*z1^2*conj(z1)", "z2 - conj(z1)^3 + z1*z2"};

CVec point() {
  CVec z(2);
  z << Complex(0.3, -0.1), Complex(0.2, 0.4);
  return z;
}

} // namespace

static void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(zexpr::parse("re(z1*conj(z2)^2) + abs2(z1 + 2*z2)^2 - im(z1)", 2));
  }
}
BENCHMARK(BM_Parse);

static void BM_CompileMap(benchmark::State& state) {
  const zexpr::PolyMapSpec spec = zexpr::PolyMapSpec::parse(2, kMap);
  for (auto _ : state) benchmark::DoNotOptimize(zexpr::CompiledMap(spec));
}
BENCHMARK(BM_CompileMap);

static void BM_AnalyticMapJet(benchmark::State& state) {
  const zexpr::CompiledMap map(zexpr::PolyMapSpec::parse(2, kMap));
  const CVec z = point();
  for (auto _ : state) benchmark::DoNotOptimize(map.jet(z));
}
BENCHMARK(BM_AnalyticMapJet);

static void BM_FdMapJet(benchmark::State& state) {
  const zexpr::CompiledMap map(zexpr::PolyMapSpec::parse(2, kMap));
  const CVec z = point();
  const MapEvaluator f = [&](const CVec& w) { return map.eval(w); };
  for (auto _ : state) benchmark::DoNotOptimize(fd_map_jet(f, z));
}
BENCHMARK(BM_FdMapJet);

static void BM_ScalarJet(benchmark::State& state) {
  const zexpr::CompiledScalar s(zexpr::ScalarSpec::parse_real(2, "re(z1*conj(z2)^2) + abs2(z1)^2"));
  const CVec z = point();
  for (auto _ : state) benchmark::DoNotOptimize(s.jet(z));
}
BENCHMARK(BM_ScalarJet);
