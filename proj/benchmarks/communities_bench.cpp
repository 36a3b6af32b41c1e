#include <benchmark/benchmark.h>

#include "market_fixture.hpp"
#include "procnet/line_graph.hpp"
#include "procnet/louvain.hpp"
#include "procnet/risk.hpp"

namespace {

using namespace procnet;

void BM_LineGraph(benchmark::State& state) {
  const auto& g = bench::market(state.range(0));
  LineGraphOptions options;
  options.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_line_graph(g, options));
  state.counters["line_edges"] = static_cast<double>(projected_line_edges(g));
}
BENCHMARK(BM_LineGraph)->Args({10'000, 1})->Args({100'000, 1})->Args({100'000, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Louvain(benchmark::State& state) {
  const auto lg = build_line_graph(bench::market(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(louvain(lg, seed++));
}
BENCHMARK(BM_Louvain)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_ClusteringCv(benchmark::State& state) {
  const auto& g = bench::market(state.range(0));
  const ClusteringEvaluator evaluator(g, louvain(build_line_graph(g), 1));
  const auto flags = g.single_bid_flags();
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.cv(flags));
}
BENCHMARK(BM_ClusteringCv)->Arg(100'000)->Unit(benchmark::kMicrosecond);

}  // namespace
