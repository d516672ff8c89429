#include <benchmark/benchmark.h>

#include "soergel/exactla.hpp"
#include "soergel/invariants.hpp"
#include "soergel/rouquier.hpp"

using namespace soergel;

namespace {

// largest Koszul differential of B_1 B_2 B_1 in the given degree
template <class F>
SparseMatrix<F> koszul_matrix(int d, const F& field) {
  const auto c = koszul_slice_complex(BSBimodule(3, {1, 2, 1}), d, field);
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.diffs.size(); ++i)
    if (c.diffs[i].nnz() > c.diffs[best].nnz()) best = i;
  return c.diffs[best];
}

void BM_RankQ(benchmark::State& state) {
  const auto m = koszul_matrix(static_cast<int>(state.range(0)), RationalField{});
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
  state.counters["rows"] = static_cast<double>(m.rows());
}
BENCHMARK(BM_RankQ)->Arg(9)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_RankFp(benchmark::State& state) {
  const auto m = koszul_matrix(static_cast<int>(state.range(0)), PrimeField{});
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
  state.counters["rows"] = static_cast<double>(m.rows());
}
BENCHMARK(BM_RankFp)->Arg(9)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_FullTwistUnreduced(benchmark::State& state) {
  const BraidWord ft = full_twist(3);
  for (auto _ : state) benchmark::DoNotOptimize(braid_to_complex(ft).summand_count());
}
BENCHMARK(BM_FullTwistUnreduced)->Unit(benchmark::kMillisecond);

void BM_FullTwistReduced(benchmark::State& state) {
  const BraidWord ft = full_twist(3);
  for (auto _ : state) benchmark::DoNotOptimize(braid_to_complex_reduced(ft).summand_count());
}
BENCHMARK(BM_FullTwistReduced)->Unit(benchmark::kMillisecond);

void BM_HHHFullTwist(benchmark::State& state) {
  SliceRequest req;
  req.cutoff = static_cast<int>(state.range(0));
  const SBComplex c = braid_to_complex_reduced(full_twist(3));
  for (auto _ : state) benchmark::DoNotOptimize(hhh(c, req).cells().size());
}
BENCHMARK(BM_HHHFullTwist)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
