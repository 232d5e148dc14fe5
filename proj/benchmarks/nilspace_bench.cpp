#include <benchmark/benchmark.h>

#include "nilspace/cohomology.hpp"
#include "nilspace/constructors.hpp"
#include "nilspace/factor.hpp"
#include "nilspace/translation.hpp"

using namespace nilspace;

namespace {

Cubespace heis(std::uint32_t p) {
  FiniteGroup h = heisenberg_group(p);
  return group_space(h, Filtration::lower_central_series(h));
}

void BM_CountCubesDegree(benchmark::State& state) {
  Cubespace s = degree_space(FinAbelianGroup::cyclic(3), 2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_cubes(s, n));
}
BENCHMARK(BM_CountCubesDegree)->DenseRange(2, 4);

void BM_CountCubesHeisenberg(benchmark::State& state) {
  Cubespace s = heis(2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_cubes(s, n));
}
BENCHMARK(BM_CountCubesHeisenberg)->DenseRange(2, 3);

void BM_VerifyAxioms(benchmark::State& state) {
  Cubespace s = degree_space(FinAbelianGroup::cyclic(static_cast<Int>(state.range(0))), 1);
  for (auto _ : state) benchmark::DoNotOptimize(verify_axioms(s, 1, 3).overall());
}
BENCHMARK(BM_VerifyAxioms)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Cohomology(benchmark::State& state) {
  Cubespace s = degree_space(FinAbelianGroup::cyclic(2), 1);
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cohomology(s, d, FinAbelianGroup::cyclic(4)).group.order());
}
BENCHMARK(BM_Cohomology)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_BundleDecomposition(benchmark::State& state) {
  Cubespace s = heis(2);
  for (auto _ : state) benchmark::DoNotOptimize(bundle_decomposition(s, 2).certificate.ok);
}
BENCHMARK(BM_BundleDecomposition)->Unit(benchmark::kMillisecond);

void BM_Translations(benchmark::State& state) {
  Cubespace s = heis(2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_translations(s, 1).order());
}
BENCHMARK(BM_Translations)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
