#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "taxgraph/linking.hpp"

using namespace taxgraph;

namespace {

std::string random_name(std::mt19937& rng, std::size_t length) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz";
    std::uniform_int_distribution<std::size_t> pick(0, sizeof(alphabet) - 2);
    std::string s;
    for (std::size_t i = 0; i < length; ++i) s.push_back(alphabet[pick(rng)]);
    return s;
}

CityCandidateIndex build_index(std::size_t entries) {
    std::mt19937 rng(99);
    std::vector<CityEntry> cities;
    cities.reserve(entries);
    for (std::size_t i = 0; i < entries; ++i) {
        std::uint64_t low = 10000 + (i * 37) % 80000;
        std::uint64_t high = low + i % 500;
        cities.push_back({"Q" + std::to_string(i), random_name(rng, 8),
                          parse_postal_spec(std::to_string(low) + "-" + std::to_string(high))});
    }
    return CityCandidateIndex::build(std::move(cities));
}

}  // namespace

static void BM_NormalizedEditDistance(benchmark::State& state) {
    std::mt19937 rng(7);
    std::string a = random_name(rng, state.range(0));
    std::string b = random_name(rng, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(normalized_edit_distance(a, b));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalizedEditDistance)->RangeMultiplier(4)->Range(8, 512)->Complexity();

static void BM_MatchCityInterval(benchmark::State& state) {
    CityCandidateIndex index = build_index(static_cast<std::size_t>(state.range(0)));
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> code(10000, 99999);
    for (auto _ : state) {
        benchmark::DoNotOptimize(match_city("brandenburg", std::to_string(code(rng)), index));
    }
}
BENCHMARK(BM_MatchCityInterval)->Range(1000, 64000);
