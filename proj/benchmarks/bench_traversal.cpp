#include <benchmark/benchmark.h>

#include <random>

#include "taxgraph/traversal.hpp"

using namespace taxgraph;

namespace {

std::string bench_lei(std::size_t i) {
    char buffer[24];
    std::snprintf(buffer, sizeof(buffer), "B%017zu00", i);
    return buffer;
}

// Forest of ownership trees with bounded fan-out.
GraphStore tree_store(std::size_t companies, std::size_t fan_out) {
    std::vector<Company> cs;
    std::vector<RelationshipEdge> es;
    cs.reserve(companies);
    for (std::size_t i = 0; i < companies; ++i) {
        Company c;
        c.lei = Lei(bench_lei(i));
        cs.push_back(std::move(c));
        if (i > 0) {
            es.push_back({Lei(bench_lei(i)), Lei(bench_lei((i - 1) / fan_out)),
                          RelKind::direct});
        }
    }
    return GraphStore::assemble(std::move(cs), std::move(es), {}, {});
}

}  // namespace

static void BM_ClosureToChildren(benchmark::State& state) {
    GraphStore store = tree_store(static_cast<std::size_t>(state.range(0)), 4);
    Lei root(bench_lei(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            closure(store, root, RelKind::direct, Direction::to_children, kUnboundedDepth));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClosureToChildren)->RangeMultiplier(4)->Range(1024, 262144)->Complexity();

static void BM_LongestChainDag(benchmark::State& state) {
    GraphStore store = tree_store(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(longest_chain(store, RelKind::direct));
    }
}
BENCHMARK(BM_LongestChainDag)->Range(1024, 262144);

static void BM_ChildStats(benchmark::State& state) {
    GraphStore store = tree_store(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(child_stats(store));
    }
}
BENCHMARK(BM_ChildStats)->Range(1024, 262144);
