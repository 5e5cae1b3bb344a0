#include <benchmark/benchmark.h>

#include "hyperwalk/kernels.hpp"
#include "hyperwalk/walk.hpp"

using namespace hyperwalk;

namespace {

// Transition chain of a revealed ball, the same shape the return DP uses.
SparseChain ball_chain(int radius) {
  auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
  LazyHalfPlane lazy(law, 1);
  lazy.reveal_hull({lazy.map().root_vertex()}, radius + 1);
  const auto& m = lazy.map();
  const auto dist = bfs_distances(m, {m.root_vertex()}, radius);
  std::vector<int> local(m.vertex_count(), -1);
  int n = 0;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] >= 0) local[v] = n++;
  }
  SparseChain chain;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (local[v] < 0) continue;
    const VertexId u(static_cast<std::int32_t>(v));
    std::vector<std::pair<int, double>> row;
    m.for_each_outgoing(u, [&](HalfEdgeId h) {
      const int l = local[m.head(h).index()];
      if (l >= 0) row.emplace_back(l, 1.0 / m.degree(u));
    });
    chain.add_row(row);
  }
  return chain;
}

void BM_PropagateSerial(benchmark::State& state) {
  const auto chain = ball_chain(static_cast<int>(state.range(0)));
  std::vector<double> in(static_cast<std::size_t>(chain.n), 1.0 / chain.n), out;
  for (auto _ : state) {
    propagate_serial(chain, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["vertices"] = chain.n;
}

void BM_PropagateParallel(benchmark::State& state) {
  const auto transposed = ball_chain(static_cast<int>(state.range(0))).transpose();
  std::vector<double> in(static_cast<std::size_t>(transposed.n), 1.0 / transposed.n), out;
  for (auto _ : state) {
    propagate_parallel(transposed, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["vertices"] = transposed.n;
  state.counters["threads"] = kernel_threads();
}

WeightedGraph bench_graph(int n) {
  Rng rng(5);
  return random_graph(rng, n + 1, 3, true);
}

std::vector<int> non_sinks(const WeightedGraph& g) {
  std::vector<int> v;
  for (int u = 0; u < g.size(); ++u) {
    if (!g.is_sink(u)) v.push_back(u);
  }
  return v;
}

void BM_SubsetSerial(benchmark::State& state) {
  const auto g = bench_graph(static_cast<int>(state.range(0)));
  const auto v = non_sinks(g);
  for (auto _ : state) benchmark::DoNotOptimize(subset_table_serial(g, v).boundary.data());
}

void BM_SubsetParallel(benchmark::State& state) {
  const auto g = bench_graph(static_cast<int>(state.range(0)));
  const auto v = non_sinks(g);
  for (auto _ : state) benchmark::DoNotOptimize(subset_table_parallel(g, v).boundary.data());
  state.counters["threads"] = kernel_threads();
}

}  // namespace

BENCHMARK(BM_PropagateSerial)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PropagateParallel)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SubsetSerial)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SubsetParallel)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
