#pragma once
// Fixture builders shared by unit, CLI and acceptance tests.

#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "taxgraph/graph_store.hpp"
#include "taxgraph/model.hpp"

namespace taxgraph::testing {

// Well-formed LEI from a short tag: uppercased tag, 'A'-padded to 18
// characters, plus two digits derived from the tag (stable).
Lei lei(std::string_view tag);

// Company with the given LEI tag and empty fields.
Company co(std::string_view tag);

RelationshipEdge edge(std::string_view child_tag, std::string_view parent_tag,
                      RelKind kind = RelKind::direct);

CountryIndicators indicators(std::string country, std::optional<std::int64_t> population,
                             std::optional<double> gdp, std::optional<double> tax_rate);

GraphStore make_store(std::vector<Company> companies, std::vector<RelationshipEdge> edges,
                      std::map<std::string, CountryIndicators> inds = {},
                      std::map<std::string, std::string> forms = {});

// Planted-construct fixture: exactly one Duck-Rabbit (US -> BM -> NL/54M6)
// and exactly one multi-hop Double Irish (IE -> DE -> NL -> IE), plus noise.
struct PlantedFixture {
    std::vector<Company> companies;
    std::vector<RelationshipEdge> edges;
    // Expected bindings (by LEI) of the planted constructs.
    Lei irish_a, irish_b, irish_c;
    Lei duck_a, duck_b, duck_c;
};
PlantedFixture planted_fixture();

struct RandomGraph {
    std::vector<Company> companies;
    std::vector<RelationshipEdge> edges;
};

// Random graph over small country/form pools; without allow_cycles the edge
// set is restricted to child index < parent index (a DAG by construction).
RandomGraph random_graph(std::mt19937& rng, std::size_t max_nodes, std::size_t max_edges,
                         bool allow_cycles);

// Random pattern DSL text: 2..4 variables, 1..3 edge clauses, random
// constraints.
std::string random_pattern_text(std::mt19937& rng);

// Randomized 1,000-company fixture with indicators, regions, links and both
// edge kinds, for analytics oracle comparison.
GraphStore analytics_fixture(std::mt19937& rng, std::size_t companies = 1000);

}  // namespace taxgraph::testing
