#include "cmono/convolutions.hpp"
#include "cmono/cumulants.hpp"
#include "cmono/limits.hpp"
#include "cmono/mixed_moments.hpp"
#include "cmono/partitions.hpp"
#include "cmono/semigroups.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cmono;

namespace {

MomentPair random_pair(std::mt19937_64& rng, int K) {
  return {moments_of_atomic(random_atomic(rng), K), moments_of_atomic(random_atomic(rng), K)};
}

void BM_CmonotoneCumulants(benchmark::State& state) {
  std::mt19937_64 rng(1);
  auto p = random_pair(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cmonotone_cumulants(p.first, p.second));
}
BENCHMARK(BM_CmonotoneCumulants)->Arg(4)->Arg(8)->Arg(12);

// the same cumulants through the monotone-partition sums
void BM_PartitionSumFormula(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<Rational> r(static_cast<std::size_t>(n), Rational(1, 2)), s(static_cast<std::size_t>(n), Rational(1, 3));
  for (auto _ : state) benchmark::DoNotOptimize(eval_cmonotone_formula(r, s, n));
}
BENCHMARK(BM_PartitionSumFormula)->DenseRange(4, 7);

void BM_CmonotonePower(benchmark::State& state) {
  std::mt19937_64 rng(2);
  auto p = random_pair(rng, 8);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cmonotone_power(p, N));
}
BENCHMARK(BM_CmonotonePower)->Arg(8)->Arg(64)->Arg(512);

void BM_MixedMomentWords(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<AlgebraSpec> fam;
  for (int i = 1; i <= 3; ++i) fam.push_back(random_tables(rng, i, 8));
  auto words = alternating_words({1, 2, 3}, static_cast<int>(state.range(0)), 2);
  for (auto _ : state)
    for (const auto& w : words) benchmark::DoNotOptimize(eval_pair(w, fam));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_MixedMomentWords)->Arg(3)->Arg(4)->Arg(5);

void BM_ArcsineFlow(benchmark::State& state) {
  auto grid = default_flow_grid();
  auto A = PickField::arcsine(1);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(A, A, 1.0, grid));
}
BENCHMARK(BM_ArcsineFlow)->Unit(benchmark::kMillisecond);

void BM_CltIterate(benchmark::State& state) {
  auto mu = arcsine_moments(1, 8);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(clt_iterate(mu, xform::Vtua{0, 0, 1}, N, 8));
}
BENCHMARK(BM_CltIterate)->Arg(64)->Arg(512);

void BM_LimitDensity(benchmark::State& state) {
  auto law = LimitLaw::deformed_clt_0a(1);
  std::vector<double> xs;
  for (int i = 1; i <= 20; ++i) xs.push_back(-i / 21.0);
  for (auto _ : state) benchmark::DoNotOptimize(limit_law_density(law, xs));
}
BENCHMARK(BM_LimitDensity)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
