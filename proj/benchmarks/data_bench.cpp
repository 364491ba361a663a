#include "benchmark/benchmark.h"
#include "cpfl/data/partition.hpp"
#include "cpfl/data/synthetic.hpp"

namespace {

using namespace cpfl;

void BM_GenSynthetic(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(data::gen_synthetic(10, 16, static_cast<int>(state.range(0)), 2.0, 7));
}
BENCHMARK(BM_GenSynthetic)->Arg(100)->Arg(600);

void BM_DirichletPartition(benchmark::State& state) {
  const auto dataset = data::gen_synthetic(10, 16, 600, 2.0, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        data::dirichlet_partition(dataset, static_cast<int>(state.range(0)), 0.1, 11));
}
BENCHMARK(BM_DirichletPartition)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
