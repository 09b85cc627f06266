#include <benchmark/benchmark.h>

#include <sstream>

#include "taxgraph/ingest.hpp"

using namespace taxgraph;

namespace {

std::string entities_csv(std::size_t rows) {
    std::ostringstream out;
    out << kEntitiesHeader << "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        char lei[24];
        std::snprintf(lei, sizeof(lei), "E%017zu00", i);
        out << lei << ",Company " << i << ",DE,,Berlin," << 10000 + i % 90000 << ",Street "
            << i % 1000 << ",DE,,Berlin," << 10000 + i % 90000 << ",Street " << i % 1000
            << ",8888\n";
    }
    return out.str();
}

}  // namespace

static void BM_ParseEntities(benchmark::State& state) {
    std::string csv = entities_csv(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_entities(csv));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(csv.size()));
}
BENCHMARK(BM_ParseEntities)->Range(1000, 100000);

static void BM_BuildGraph(benchmark::State& state) {
    std::string csv = entities_csv(static_cast<std::size_t>(state.range(0)));
    EntitiesParse parsed = parse_entities(csv);
    for (auto _ : state) {
        auto companies = parsed.companies;
        benchmark::DoNotOptimize(build_graph(std::move(companies), {}, {}, {}));
    }
}
BENCHMARK(BM_BuildGraph)->Range(1000, 100000);

BENCHMARK_MAIN();
