#include "oracles.hpp"

#include <algorithm>

#include "taxgraph/text.hpp"

namespace taxgraph::testing {

std::size_t levenshtein_oracle(std::u32string_view a, std::u32string_view b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                            std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
    }
    return d[a.size()][b.size()];
}

std::vector<Lei> closure_oracle(const GraphStore& store, const Lei& root, RelKind kind,
                                Direction direction) {
    auto neighbors = [&](std::uint32_t node) {
        return direction == Direction::to_parents ? store.parents_of(node, kind)
                                                  : store.children_of(node, kind);
    };
    std::uint32_t root_index = *store.index_of(root);
    std::set<std::uint32_t> members;
    while (true) {
        std::set<std::uint32_t> next = members;
        for (std::uint32_t n : neighbors(root_index)) next.insert(n);
        for (std::uint32_t m : members) {
            for (std::uint32_t n : neighbors(m)) next.insert(n);
        }
        if (next == members) break;
        members = std::move(next);
    }
    std::vector<Lei> result;
    for (std::uint32_t m : members) result.push_back(store.company_at(m).lei);
    return result;
}

namespace {

bool path_dfs(const GraphStore& store, std::uint32_t current, std::uint32_t target, RelKind kind,
              int remaining, std::set<std::uint32_t>& on_path) {
    if (remaining == 0) return false;
    for (std::uint32_t next : store.parents_of(current, kind)) {
        if (next == target) return true;
        if (on_path.contains(next)) continue;
        on_path.insert(next);
        if (path_dfs(store, next, target, kind, remaining - 1, on_path)) return true;
        on_path.erase(next);
    }
    return false;
}

}  // namespace

bool path_exists_oracle(const GraphStore& store, std::uint32_t from, std::uint32_t to,
                        RelKind kind, int max_len) {
    std::set<std::uint32_t> on_path{from};
    return path_dfs(store, from, to, kind, max_len, on_path);
}

std::vector<std::map<std::string, Lei>> match_oracle(const GraphStore& store,
                                                     const PatternAst& ast, int max_path_len) {
    std::vector<std::map<std::string, Lei>> results;
    std::size_t n = store.company_count();
    std::size_t vars = ast.vars.size();
    std::vector<std::uint32_t> assignment(vars, 0);

    auto constraint_ok = [&](std::size_t v, std::uint32_t node) {
        const Company& c = store.company_at(node);
        for (const NodeConstraint& constraint : ast.vars[v].constraints) {
            switch (constraint.field) {
                case ConstraintField::hq_country:
                    if (c.hq_country != constraint.value) return false;
                    break;
                case ConstraintField::legal_country:
                    if (c.legal_country != constraint.value) return false;
                    break;
                case ConstraintField::legal_form:
                    if (c.legal_form_code != constraint.value) return false;
                    break;
                case ConstraintField::region:
                    if (c.legal_region != constraint.value) return false;
                    break;
            }
        }
        return true;
    };

    auto enumerate = [&](auto&& self, std::size_t v) -> void {
        if (v == vars) {
            for (const EdgeClause& e : ast.edges) {
                std::uint32_t a = assignment[e.from];
                std::uint32_t b = assignment[e.to];
                int cap = e.transitive ? max_path_len : 1;
                if (!path_exists_oracle(store, a, b, e.kind, cap)) return;
            }
            std::map<std::string, Lei> binding;
            for (std::size_t i = 0; i < vars; ++i) {
                binding.emplace(ast.vars[i].name, store.company_at(assignment[i]).lei);
            }
            results.push_back(std::move(binding));
            return;
        }
        for (std::uint32_t node = 0; node < n; ++node) {
            if (!constraint_ok(v, node)) continue;
            assignment[v] = node;
            self(self, v + 1);
        }
    };
    enumerate(enumerate, 0);
    std::sort(results.begin(), results.end());
    return results;
}

std::vector<Lei> longest_chain_oracle(const GraphStore& store, RelKind kind) {
    std::size_t n = store.company_count();
    std::vector<std::uint32_t> best, path;
    std::set<std::uint32_t> on_path;
    auto dfs = [&](auto&& self, std::uint32_t u) -> void {
        path.push_back(u);
        on_path.insert(u);
        if (path.size() > best.size()) {
            best = path;
        } else if (path.size() == best.size()) {
            // lexicographic tie-break on the LEI sequence
            std::vector<std::string> a, b;
            for (std::uint32_t x : path) a.push_back(store.company_at(x).lei.str());
            for (std::uint32_t x : best) b.push_back(store.company_at(x).lei.str());
            if (a < b) best = path;
        }
        for (std::uint32_t next : store.parents_of(u, kind)) {
            if (!on_path.contains(next)) self(self, next);
        }
        on_path.erase(u);
        path.pop_back();
    };
    for (std::uint32_t start = 0; start < n; ++start) dfs(dfs, start);
    std::vector<Lei> chain;
    if (best.size() >= 2) {
        for (std::uint32_t x : best) chain.push_back(store.company_at(x).lei);
    }
    return chain;
}

std::map<std::size_t, std::size_t> chain_histogram_oracle(const GraphStore& store, RelKind kind) {
    std::map<std::size_t, std::size_t> histogram;
    std::size_t n = store.company_count();
    std::vector<std::uint32_t> path;
    std::set<std::uint32_t> on_path;
    auto maximal = [&] {
        for (std::uint32_t pred : store.children_of(path.front(), kind)) {
            if (!on_path.contains(pred)) return false;
        }
        for (std::uint32_t succ : store.parents_of(path.back(), kind)) {
            if (!on_path.contains(succ)) return false;
        }
        return true;
    };
    auto dfs = [&](auto&& self, std::uint32_t u) -> void {
        path.push_back(u);
        on_path.insert(u);
        if (path.size() >= 2 && maximal()) ++histogram[path.size() - 1];
        for (std::uint32_t next : store.parents_of(u, kind)) {
            if (!on_path.contains(next)) self(self, next);
        }
        on_path.erase(u);
        path.pop_back();
    };
    for (std::uint32_t start = 0; start < n; ++start) dfs(dfs, start);
    return histogram;
}

CountryRatioOracle per_capita_oracle(const GraphStore& store) {
    CountryRatioOracle oracle;
    std::map<std::string, std::size_t> counts;
    for (const Company& c : store.companies()) {
        if (!c.legal_country.empty()) ++counts[c.legal_country];
    }
    for (const auto& [country, ind] : store.indicators()) {
        if (ind.population && *ind.population > 0) {
            std::size_t count = counts.contains(country) ? counts[country] : 0;
            oracle.counts[country] = count;
            oracle.ratios[country] =
                static_cast<double>(count) / static_cast<double>(*ind.population);
        }
    }
    for (const auto& [country, count] : counts) {
        (void)count;
        if (!oracle.ratios.contains(country)) oracle.skipped.insert(country);
    }
    return oracle;
}

CountryRatioOracle per_gdp_oracle(const GraphStore& store) {
    CountryRatioOracle oracle;
    std::map<std::string, std::size_t> counts;
    for (const Company& c : store.companies()) {
        if (!c.legal_country.empty()) ++counts[c.legal_country];
    }
    for (const auto& [country, ind] : store.indicators()) {
        if (ind.gdp_million_usd && *ind.gdp_million_usd > 0) {
            std::size_t count = counts.contains(country) ? counts[country] : 0;
            oracle.counts[country] = count;
            oracle.ratios[country] = static_cast<double>(count) / *ind.gdp_million_usd;
        }
    }
    for (const auto& [country, count] : counts) {
        (void)count;
        if (!oracle.ratios.contains(country)) oracle.skipped.insert(country);
    }
    return oracle;
}

std::map<std::string, std::size_t> address_concentration_oracle(const GraphStore& store) {
    std::map<std::string, std::size_t> counts;
    for (const Company& c : store.companies()) {
        std::string parts;
        for (const std::string* p : {&c.legal_address_line, &c.legal_postal, &c.legal_city,
                                     &c.legal_region, &c.legal_country}) {
            if (p->empty()) continue;
            if (!parts.empty()) parts += " ";
            parts += *p;
        }
        std::string key = normalize_address(parts);
        if (!key.empty()) ++counts[key];
    }
    return counts;
}

DivergenceOracle divergence_oracle(const GraphStore& store) {
    DivergenceOracle oracle;
    for (const Company& c : store.companies()) {
        if (c.legal_country.empty() || c.hq_country.empty()) continue;
        ++oracle.considered;
        if (c.legal_country != c.hq_country) {
            ++oracle.divergent;
            ++oracle.flows[{c.hq_country, c.legal_country}];
        }
    }
    return oracle;
}

std::optional<double> tax_delta_hq_legal_oracle(const GraphStore& store, bool divergent_only,
                                                std::size_t* samples) {
    double sum = 0;
    std::size_t count = 0;
    for (const Company& c : store.companies()) {
        if (c.legal_country.empty() || c.hq_country.empty()) continue;
        if (divergent_only && c.legal_country == c.hq_country) continue;
        const CountryIndicators* hq = store.indicators_for(c.hq_country);
        const CountryIndicators* legal = store.indicators_for(c.legal_country);
        if (!hq || !legal || !hq->corporate_tax_rate_pct || !legal->corporate_tax_rate_pct) {
            continue;
        }
        sum += *hq->corporate_tax_rate_pct - *legal->corporate_tax_rate_pct;
        ++count;
    }
    if (samples) *samples = count;
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

std::optional<double> tax_delta_parent_child_oracle(const GraphStore& store,
                                                    bool multinational_only,
                                                    std::size_t* samples) {
    double sum = 0;
    std::size_t count = 0;
    for (const IndexEdge& e : store.edges(RelKind::direct)) {
        const Company& child = store.company_at(e.child);
        const Company& parent = store.company_at(e.parent);
        if (child.legal_country.empty() || parent.legal_country.empty()) continue;
        if (multinational_only && child.legal_country == parent.legal_country) continue;
        const CountryIndicators* pi = store.indicators_for(parent.legal_country);
        const CountryIndicators* ci = store.indicators_for(child.legal_country);
        if (!pi || !ci || !pi->corporate_tax_rate_pct || !ci->corporate_tax_rate_pct) continue;
        sum += *pi->corporate_tax_rate_pct - *ci->corporate_tax_rate_pct;
        ++count;
    }
    if (samples) *samples = count;
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

std::optional<RegionShareOracle> region_share_oracle(const GraphStore& store,
                                                     const std::string& country,
                                                     const std::string& region) {
    std::size_t denom = 0, numer = 0, hq_numer = 0;
    for (const Company& c : store.companies()) {
        if (c.legal_country != country) continue;
        ++denom;
        if (c.legal_region != region) continue;
        ++numer;
        if (c.hq_country == country && c.hq_region == region) ++hq_numer;
    }
    if (denom == 0) return std::nullopt;
    RegionShareOracle oracle;
    oracle.legal_share = static_cast<double>(numer) / static_cast<double>(denom);
    if (numer > 0) {
        oracle.hq_share_among_legal = static_cast<double>(hq_numer) / static_cast<double>(numer);
    }
    return oracle;
}

std::optional<double> multinational_share_oracle(const GraphStore& store) {
    std::size_t considered = 0, multinational = 0;
    for (const IndexEdge& e : store.edges(RelKind::direct)) {
        const Company& child = store.company_at(e.child);
        const Company& parent = store.company_at(e.parent);
        if (child.legal_country.empty() || parent.legal_country.empty()) continue;
        ++considered;
        if (child.legal_country != parent.legal_country) ++multinational;
    }
    if (considered == 0) return std::nullopt;
    return static_cast<double>(multinational) / static_cast<double>(considered);
}

std::map<std::string, std::pair<std::size_t, double>> city_density_oracle(
    const GraphStore& store, const std::map<std::string, double>& areas, std::size_t min_count,
    bool use_hq) {
    std::map<std::string, std::size_t> counts;
    for (const Company& c : store.companies()) {
        const std::string& link = use_hq ? c.hq_city_link : c.legal_city_link;
        if (!link.empty()) ++counts[link];
    }
    std::map<std::string, std::pair<std::size_t, double>> result;
    for (const auto& [link, count] : counts) {
        if (count <= min_count) continue;
        auto it = areas.find(link);
        if (it == areas.end() || it->second <= 0) continue;
        result[link] = {count, static_cast<double>(count) / it->second};
    }
    return result;
}

}  // namespace taxgraph::testing
