#include "taxgraph/graph_store.hpp"

#include <algorithm>
#include <set>

#include "taxgraph/text.hpp"

namespace taxgraph {

namespace {

std::string company_address_key(const Company& c) {
    std::string joined;
    joined.reserve(c.legal_address_line.size() + c.legal_postal.size() + c.legal_city.size() +
                   c.legal_region.size() + c.legal_country.size() + 8);
    for (const std::string* part : {&c.legal_address_line, &c.legal_postal, &c.legal_city,
                                    &c.legal_region, &c.legal_country}) {
        if (part->empty()) continue;
        if (!joined.empty()) joined.push_back(' ');
        joined.append(*part);
    }
    return normalize_address(joined);
}

}  // namespace

GraphStore GraphStore::assemble(std::vector<Company> companies,
                                std::vector<RelationshipEdge> edges,
                                std::map<std::string, CountryIndicators> indicators,
                                std::map<std::string, std::string> legal_form_names,
                                AssemblyCounts* counts) {
    AssemblyCounts local_counts;
    GraphStore store;

    // Drop self-loops and exact duplicate edges up front.
    {
        std::vector<RelationshipEdge> cleaned;
        cleaned.reserve(edges.size());
        for (auto& e : edges) {
            if (e.child == e.parent) {
                ++local_counts.self_loops_dropped;
                continue;
            }
            cleaned.push_back(std::move(e));
        }
        std::sort(cleaned.begin(), cleaned.end());
        std::size_t before = cleaned.size();
        cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
        local_counts.duplicate_edges_dropped = before - cleaned.size();
        edges = std::move(cleaned);
    }

    // Deduplicate companies by LEI; stable sort keeps input order among
    // equal keys, so the first record wins a conflict.
    std::stable_sort(companies.begin(), companies.end(),
                     [](const Company& a, const Company& b) { return a.lei < b.lei; });
    {
        std::vector<Company> unique_companies;
        unique_companies.reserve(companies.size());
        for (auto& c : companies) {
            if (!unique_companies.empty() && unique_companies.back().lei == c.lei) {
                ++local_counts.duplicate_companies_dropped;
                continue;
            }
            unique_companies.push_back(std::move(c));
        }
        companies = std::move(unique_companies);
    }

    // Promote dangling endpoints to stubs so chains survive registry gaps.
    {
        std::set<Lei> known;
        for (const auto& c : companies) known.insert(c.lei);
        std::set<Lei> missing;
        for (const auto& e : edges) {
            if (!known.contains(e.child)) missing.insert(e.child);
            if (!known.contains(e.parent)) missing.insert(e.parent);
        }
        local_counts.dangling_endpoints = missing.size();
        for (const auto& lei : missing) {
            Company stub;
            stub.lei = lei;
            stub.stub = true;
            stub.lei_checksum_ok = validate_lei(lei.str()).checksum_ok;
            companies.push_back(std::move(stub));
            ++local_counts.stubs;
        }
        std::sort(companies.begin(), companies.end(),
                  [](const Company& a, const Company& b) { return a.lei < b.lei; });
    }

    store.companies_ = std::move(companies);
    store.stub_count_ = local_counts.stubs;
    store.lei_index_.reserve(store.companies_.size() * 2);
    for (std::uint32_t i = 0; i < store.companies_.size(); ++i) {
        store.lei_index_.emplace(store.companies_[i].lei.str(), i);
    }

    for (const auto& e : edges) {
        IndexEdge ie{store.lei_index_.at(e.child.str()), store.lei_index_.at(e.parent.str())};
        store.edges_[idx(e.kind)].push_back(ie);
    }
    for (auto kind : {RelKind::direct, RelKind::ultimate}) {
        auto& kind_edges = store.edges_[idx(kind)];
        std::sort(kind_edges.begin(), kind_edges.end());
        store.to_parents_[idx(kind)] = build_csr(store.companies_.size(), kind_edges, false);
        store.to_children_[idx(kind)] = build_csr(store.companies_.size(), kind_edges, true);
    }

    store.indicators_ = std::move(indicators);
    store.legal_form_names_ = std::move(legal_form_names);

    for (std::uint32_t i = 0; i < store.companies_.size(); ++i) {
        std::string key = company_address_key(store.companies_[i]);
        if (!key.empty()) store.address_index_[std::move(key)].push_back(i);
    }

    // Distinct class counts for the contents report.
    {
        std::set<std::string> countries, cities, forms;
        for (const auto& [country, _] : store.indicators_) countries.insert(country);
        for (const auto& [code, _] : store.legal_form_names_) forms.insert(code);
        for (const auto& c : store.companies_) {
            if (!c.legal_country.empty()) countries.insert(c.legal_country);
            if (!c.hq_country.empty()) countries.insert(c.hq_country);
            if (!c.legal_form_code.empty()) forms.insert(c.legal_form_code);
            if (!c.legal_city.empty())
                cities.insert(c.legal_country + "|" + fold_string(c.legal_city));
            if (!c.hq_city.empty()) cities.insert(c.hq_country + "|" + fold_string(c.hq_city));
        }
        store.distinct_countries_ = countries.size();
        store.distinct_cities_ = cities.size();
        store.distinct_legal_forms_ = forms.size();
    }

    if (counts) *counts = local_counts;
    return store;
}

GraphStore::Csr GraphStore::build_csr(std::size_t nodes, const std::vector<IndexEdge>& edges,
                                      bool by_parent) {
    Csr csr;
    csr.offsets.assign(nodes + 1, 0);
    for (const auto& e : edges) {
        std::uint32_t key = by_parent ? e.parent : e.child;
        ++csr.offsets[key + 1];
    }
    for (std::size_t i = 1; i <= nodes; ++i) csr.offsets[i] += csr.offsets[i - 1];
    csr.targets.resize(edges.size());
    std::vector<std::uint64_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
    for (const auto& e : edges) {
        std::uint32_t key = by_parent ? e.parent : e.child;
        std::uint32_t value = by_parent ? e.child : e.parent;
        csr.targets[cursor[key]++] = value;
    }
    // Per-node target lists sorted for deterministic traversal order.
    for (std::size_t i = 0; i < nodes; ++i) {
        std::sort(csr.targets.begin() + static_cast<std::ptrdiff_t>(csr.offsets[i]),
                  csr.targets.begin() + static_cast<std::ptrdiff_t>(csr.offsets[i + 1]));
    }
    return csr;
}

std::optional<std::uint32_t> GraphStore::index_of(const Lei& lei) const {
    auto it = lei_index_.find(lei.str());
    if (it == lei_index_.end()) return std::nullopt;
    return it->second;
}

const Company* GraphStore::find(const Lei& lei) const {
    auto index = index_of(lei);
    return index ? &companies_[*index] : nullptr;
}

std::optional<Company> GraphStore::get_company(const Lei& lei) const {
    const Company* c = find(lei);
    if (!c) return std::nullopt;
    return *c;
}

std::span<const std::uint32_t> GraphStore::parents_of(std::uint32_t company, RelKind kind) const {
    const Csr& csr = to_parents_[idx(kind)];
    return {csr.targets.data() + csr.offsets[company],
            csr.targets.data() + csr.offsets[company + 1]};
}

std::span<const std::uint32_t> GraphStore::children_of(std::uint32_t company, RelKind kind) const {
    const Csr& csr = to_children_[idx(kind)];
    return {csr.targets.data() + csr.offsets[company],
            csr.targets.data() + csr.offsets[company + 1]};
}

const CountryIndicators* GraphStore::indicators_for(std::string_view country) const {
    auto it = indicators_.find(std::string(country));
    return it == indicators_.end() ? nullptr : &it->second;
}

}  // namespace taxgraph
