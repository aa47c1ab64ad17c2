// OpenMP kernels against their serial references on one sampled graph per
// size. Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <map>

#include "geocd/eval.hpp"
#include "geocd/gbg.hpp"
#include "geocd/moments.hpp"

using namespace geocd;

namespace {

ModelParams params_for(double n) {
  ModelParams p;
  p.lambda = 20.0;
  p.d = 2;
  p.n = n;
  p.f_in = ConnectionFunction::scaled_indicator(1.0, 1.0);
  p.f_out = ConnectionFunction::scaled_indicator(1.0, 0.5);
  return p;
}

struct Fixture {
  ModelParams params;
  SpatialGraph g;
  CellMap cells;
  PairwiseThreshold threshold;

  explicit Fixture(double n)
      : params(params_for(n)),
        g(sample_coupled(params, 1, {}, false)),
        cells(bin_nodes(g, grid_for(g, 1.0))),
        threshold(params, cells.grid.R()) {}
};

const Fixture& fixture(double n) {
  static std::map<double, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
  return it->second;
}

void BM_PairSigns(benchmark::State& state) {
  const auto& f = fixture(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_pair_signs(f.g, f.cells, f.threshold));
  state.counters["nodes"] = static_cast<double>(f.g.size());
}

void BM_PairSignsReference(benchmark::State& state) {
  const auto& f = fixture(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_pair_signs_reference(f.g, f.cells, f.threshold));
  state.counters["nodes"] = static_cast<double>(f.g.size());
}

void BM_TriangleProfile(benchmark::State& state) {
  const auto& f = fixture(static_cast<double>(state.range(0)));
  const auto h = HSpec::standard(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(triangle_profile(f.g, 1e9, h, f.params.f_in, f.params.f_out));
}

void BM_TriangleProfileReference(benchmark::State& state) {
  const auto& f = fixture(static_cast<double>(state.range(0)));
  const auto h = HSpec::standard(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(triangle_profile_reference(f.g, 1e9, h, f.params.f_in, f.params.f_out));
}

}  // namespace

BENCHMARK(BM_PairSigns)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairSignsReference)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TriangleProfile)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TriangleProfileReference)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
