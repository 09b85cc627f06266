#include <benchmark/benchmark.h>

#include <random>

#include "taxgraph/patterns.hpp"

using namespace taxgraph;

namespace {

// Registry-shaped graph: sparse ownership edges, many countries, the
// occasional IE/NL/BM company so the detectors have real work without the
// match count exploding the way dense random graphs do.
GraphStore pattern_store(std::size_t companies) {
    static const char* countries[] = {"IE", "NL", "US", "DE", "FR", "KY", "BM", "LU",
                                      "GB", "CH", "IT", "ES", "SE", "DK", "JP", "BR"};
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::size_t> country(0, 15);
    std::bernoulli_distribution dutch_bv(0.1);

    std::vector<Company> cs;
    cs.reserve(companies);
    for (std::size_t i = 0; i < companies; ++i) {
        char lei[24];
        std::snprintf(lei, sizeof(lei), "P%017zu00", i);
        Company c;
        c.lei = Lei(lei);
        c.hq_country = countries[country(rng)];
        c.legal_country = c.hq_country;
        c.legal_form_code = dutch_bv(rng) ? "54M6" : "8888";
        cs.push_back(std::move(c));
    }
    std::vector<RelationshipEdge> es;
    for (std::size_t i = 1; i < companies; ++i) {
        // forest with bounded fan-out, plus an ultimate edge now and then
        std::uniform_int_distribution<std::size_t> parent(i >= 8 ? i - 8 : 0, i - 1);
        es.push_back({cs[i].lei, cs[parent(rng)].lei, RelKind::direct});
        if (i % 5 == 0) es.push_back({cs[i].lei, cs[parent(rng)].lei, RelKind::ultimate});
    }
    return GraphStore::assemble(std::move(cs), std::move(es), {}, {});
}

}  // namespace

static void BM_ParsePattern(benchmark::State& state) {
    std::string text =
        "a.hq=IE; b.hq=NL; c.hq=IE; a -[direct+]-> b; b -[direct+]-> c;";
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_pattern(text));
    }
}
BENCHMARK(BM_ParsePattern);

static void BM_DetectDoubleIrish(benchmark::State& state) {
    GraphStore store = pattern_store(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_double_irish(store, {}));
    }
}
BENCHMARK(BM_DetectDoubleIrish)->RangeMultiplier(4)->Range(1024, 16384);

static void BM_DetectDuckRabbit(benchmark::State& state) {
    GraphStore store = pattern_store(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_duck_rabbit(store, {}));
    }
}
BENCHMARK(BM_DetectDuckRabbit)->RangeMultiplier(4)->Range(1024, 16384);
