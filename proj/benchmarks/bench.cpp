#include <benchmark/benchmark.h>

#include "clutternav/centrality.hpp"
#include "clutternav/executor.hpp"
#include "clutternav/generator.hpp"
#include "clutternav/metrics.hpp"
#include "clutternav/policies.hpp"
#include "clutternav/world.hpp"

namespace clutternav {
namespace {

Episode episode(int rooms) {
    GenerationConfig g;
    g.n_rooms = rooms;
    g.seed = 1234 + rooms;
    g.clutter.seed = g.seed;
    g.horizon = 5;
    return generate_episode(g);
}

void BM_ShortestDistances(benchmark::State& state) {
    const Episode ep = episode(static_cast<int>(state.range(0)));
    const TraversalMask mask = World(ep).graph().mask();
    for (auto _ : state) benchmark::DoNotOptimize(shortest_distances(mask, ep.start));
    state.counters["cells"] = static_cast<double>(mask.open_count());
}
BENCHMARK(BM_ShortestDistances)->Arg(1)->Arg(5)->Arg(10);

void BM_Betweenness(benchmark::State& state) {
    const Episode ep = episode(static_cast<int>(state.range(0)));
    const TraversalMask mask = World(ep).graph().mask();
    for (auto _ : state) benchmark::DoNotOptimize(betweenness(mask));
    state.counters["cells"] = static_cast<double>(mask.open_count());
}
BENCHMARK(BM_Betweenness)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PriceOfClutter(benchmark::State& state) {
    const Episode ep = episode(static_cast<int>(state.range(0)));
    const GridGraph current = World(ep).graph();
    const GridGraph free = obstacle_free_graph(ep);
    for (auto _ : state) benchmark::DoNotOptimize(price_of_clutter(current, free));
}
BENCHMARK(BM_PriceOfClutter)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Episode(benchmark::State& state) {
    const Episode ep = episode(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto policy = make_policy("ours", {});
        benchmark::DoNotOptimize(run_episode(ep, *policy));
    }
}
BENCHMARK(BM_Episode)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace clutternav

BENCHMARK_MAIN();
