#include "fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace taxgraph::testing {

Lei lei(std::string_view tag) {
    std::string value;
    for (char c : tag) value.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    std::size_t checksum = 0;
    for (char c : value) checksum = checksum * 31 + static_cast<unsigned char>(c);
    while (value.size() < 18) value.push_back('A');
    value.resize(18);
    value.push_back(static_cast<char>('0' + (checksum / 10) % 10));
    value.push_back(static_cast<char>('0' + checksum % 10));
    return Lei(value);
}

Company co(std::string_view tag) {
    Company c;
    c.lei = lei(tag);
    return c;
}

RelationshipEdge edge(std::string_view child_tag, std::string_view parent_tag, RelKind kind) {
    return {lei(child_tag), lei(parent_tag), kind};
}

CountryIndicators indicators(std::string country, std::optional<std::int64_t> population,
                             std::optional<double> gdp, std::optional<double> tax_rate) {
    CountryIndicators ind;
    ind.country = std::move(country);
    ind.population = population;
    ind.gdp_million_usd = gdp;
    ind.corporate_tax_rate_pct = tax_rate;
    return ind;
}

GraphStore make_store(std::vector<Company> companies, std::vector<RelationshipEdge> edges,
                      std::map<std::string, CountryIndicators> inds,
                      std::map<std::string, std::string> forms) {
    return GraphStore::assemble(std::move(companies), std::move(edges), std::move(inds),
                                std::move(forms));
}

PlantedFixture planted_fixture() {
    PlantedFixture f;
    auto add = [&](std::string_view tag, const char* legal, const char* hq,
                   const char* form = "") {
        Company c = co(tag);
        c.legal_country = legal;
        c.hq_country = hq;
        c.legal_form_code = form;
        f.companies.push_back(std::move(c));
        return f.companies.back().lei;
    };

    // Double Irish: IE -> DE -> NL -> IE, one intermediary on the first hop.
    f.irish_a = add("irishbottom", "IE", "IE");
    Lei middle = add("irishmiddle", "DE", "DE");
    f.irish_b = add("irishconduit", "NL", "NL", "54M7");
    f.irish_c = add("irishtop", "IE", "IE");
    f.edges.push_back({f.irish_a, middle, RelKind::direct});
    f.edges.push_back({middle, f.irish_b, RelKind::direct});
    f.edges.push_back({f.irish_b, f.irish_c, RelKind::direct});

    // Duck-Rabbit: NL/54M6 child -> BM haven -> US ultimate parent.
    f.duck_a = add("duckparent", "US", "US");
    f.duck_b = add("duckhaven", "BM", "BM");
    f.duck_c = add("duckchild", "NL", "NL", "54M6");
    f.edges.push_back({f.duck_b, f.duck_a, RelKind::ultimate});
    f.edges.push_back({f.duck_c, f.duck_b, RelKind::direct});

    // Noise that must not match: a KY company with the wrong child form, a
    // DE->FR chain, an isolated NL/54M6 company.
    Lei ky = add("noisehaven", "KY", "KY");
    Lei wrongform = add("noisechild", "NL", "NL", "XXXX");
    Lei de = add("noisede", "DE", "DE");
    Lei fr = add("noisefr", "FR", "FR");
    add("noisenl", "NL", "NL", "54M6");
    f.edges.push_back({wrongform, ky, RelKind::direct});
    f.edges.push_back({ky, f.duck_a, RelKind::ultimate});
    f.edges.push_back({de, fr, RelKind::direct});
    return f;
}

namespace {

const std::vector<std::string>& country_pool() {
    static const std::vector<std::string> pool = {"IE", "NL", "US", "BM", "KY",
                                                  "DE", "FR", "LI", "LU", "CH"};
    return pool;
}

const std::vector<std::string>& form_pool() {
    static const std::vector<std::string> pool = {"54M6", "54M7", "8888", "2HBR"};
    return pool;
}

}  // namespace

RandomGraph random_graph(std::mt19937& rng, std::size_t max_nodes, std::size_t max_edges,
                         bool allow_cycles) {
    RandomGraph graph;
    std::uniform_int_distribution<std::size_t> node_count(2, max_nodes);
    std::size_t n = node_count(rng);

    // Bias toward the first three countries so random patterns actually
    // match now and then.
    std::uniform_int_distribution<std::size_t> country_pick(0, country_pool().size() - 1);
    std::uniform_int_distribution<std::size_t> narrow_pick(0, 2);
    std::uniform_int_distribution<std::size_t> form_pick(0, form_pool().size() - 1);
    std::bernoulli_distribution narrow(0.7);
    for (std::size_t i = 0; i < n; ++i) {
        Company c = co("n" + std::to_string(i));
        c.legal_country = country_pool()[narrow(rng) ? narrow_pick(rng) : country_pick(rng)];
        c.hq_country = country_pool()[narrow(rng) ? narrow_pick(rng) : country_pick(rng)];
        c.legal_form_code = form_pool()[form_pick(rng) % 2];
        graph.companies.push_back(std::move(c));
    }

    std::uniform_int_distribution<std::size_t> edge_count(1, max_edges);
    std::uniform_int_distribution<std::size_t> node_pick(0, n - 1);
    std::bernoulli_distribution ultimate(0.3);
    std::size_t edges = edge_count(rng);
    std::set<std::tuple<std::size_t, std::size_t, bool>> seen;
    for (std::size_t e = 0; e < edges; ++e) {
        std::size_t a = node_pick(rng), b = node_pick(rng);
        if (a == b) continue;
        if (!allow_cycles && a > b) std::swap(a, b);
        bool ult = ultimate(rng);
        if (!seen.insert({a, b, ult}).second) continue;
        graph.edges.push_back({graph.companies[a].lei, graph.companies[b].lei,
                               ult ? RelKind::ultimate : RelKind::direct});
    }
    return graph;
}

std::string random_pattern_text(std::mt19937& rng) {
    std::uniform_int_distribution<int> var_count(2, 4);
    std::uniform_int_distribution<int> edge_count(1, 3);
    std::uniform_int_distribution<std::size_t> narrow_pick(0, 2);
    std::uniform_int_distribution<std::size_t> country_pick(0, country_pool().size() - 1);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution narrow(0.8);
    std::bernoulli_distribution constrain_hq(0.4);
    std::bernoulli_distribution rare(0.12);

    int vars = var_count(rng);
    auto var_name = [](int i) { return std::string(1, static_cast<char>('a' + i)); };
    auto country = [&] {
        return country_pool()[narrow(rng) ? narrow_pick(rng) : country_pick(rng)];
    };
    std::uniform_int_distribution<int> var_pick(0, vars - 1);

    std::string text;
    for (int v = 0; v < vars; ++v) {
        if (constrain_hq(rng)) text += var_name(v) + ".hq=" + country() + ";\n";
        if (rare(rng)) text += var_name(v) + ".legal=" + country() + ";\n";
        if (rare(rng)) text += var_name(v) + ".form=" + form_pool()[narrow_pick(rng) % 2] + ";\n";
    }
    int edges = edge_count(rng);
    for (int e = 0; e < edges; ++e) {
        int from = var_pick(rng);
        int to = var_pick(rng);
        if (from == to) to = (to + 1) % vars;
        text += var_name(from) + " -[" + (coin(rng) ? "direct" : "ultimate") +
                (coin(rng) ? "+" : "") + "]-> " + var_name(to) + ";\n";
    }
    return text;
}

GraphStore analytics_fixture(std::mt19937& rng, std::size_t companies) {
    std::vector<Company> all;
    std::uniform_int_distribution<std::size_t> country_pick(0, country_pool().size() - 1);
    std::uniform_int_distribution<std::size_t> form_pick(0, form_pool().size() - 1);
    std::uniform_int_distribution<int> region_pick(0, 3);
    std::uniform_int_distribution<int> city_pick(0, 5);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution rare(0.1);

    static const char* regions[] = {"", "DE", "CA", "NY"};
    static const char* cities[] = {"Vaduz", "Puteaux", "Berlin", "Dublin", "Zug", ""};

    for (std::size_t i = 0; i < companies; ++i) {
        Company c = co("r" + std::to_string(i));
        c.legal_country = rare(rng) ? "" : country_pool()[country_pick(rng)];
        c.hq_country = rare(rng) ? "" : country_pool()[country_pick(rng)];
        c.legal_region = regions[region_pick(rng)];
        c.hq_region = regions[region_pick(rng)];
        c.legal_form_code = form_pool()[form_pick(rng)];
        int city = city_pick(rng);
        c.legal_city = cities[city];
        if (!c.legal_city.empty()) c.legal_city_link = "Q" + std::to_string(city);
        int hq_city = city_pick(rng);
        c.hq_city = cities[hq_city];
        if (!c.hq_city.empty()) c.hq_city_link = "Q" + std::to_string(hq_city);
        c.legal_address_line = "Street " + std::to_string(i % 17);
        c.legal_postal = std::to_string(1000 + i % 13);
        all.push_back(std::move(c));
    }

    std::vector<RelationshipEdge> edges;
    std::uniform_int_distribution<std::size_t> node_pick(0, companies - 1);
    for (std::size_t e = 0; e < companies / 2; ++e) {
        std::size_t a = node_pick(rng), b = node_pick(rng);
        if (a == b) continue;
        edges.push_back({all[a].lei, all[b].lei, coin(rng) ? RelKind::direct : RelKind::ultimate});
    }

    std::map<std::string, CountryIndicators> inds;
    inds.emplace("IE", indicators("IE", 4853506, 382487, 12.5));
    inds.emplace("NL", indicators("NL", 17231017, 913658, 25));
    inds.emplace("US", indicators("US", 327167434, 20544343, 25.9));
    inds.emplace("BM", indicators("BM", 63968, 7341, 0));
    inds.emplace("KY", indicators("KY", 64174, 5517, 0));
    inds.emplace("DE", indicators("DE", 82927922, 3947620, 30));
    inds.emplace("FR", indicators("FR", 66987244, 2777535, 32));
    inds.emplace("LI", indicators("LI", 37910, 6214, 12.5));
    // LU: population but no GDP; CH: no indicators at all (skip paths).
    inds.emplace("LU", indicators("LU", 607728, std::nullopt, 24.9));

    return make_store(std::move(all), std::move(edges), std::move(inds),
                      {{"54M6", "Besloten Vennootschap"}});
}

}  // namespace taxgraph::testing
