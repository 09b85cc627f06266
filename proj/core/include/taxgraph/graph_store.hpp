#pragma once
// GraphStore: the immutable indexed ownership graph.
//
// Layout:
// - companies sorted by LEI, addressed by dense uint32 index
// - per-kind CSR adjacency in both directions (child->parents, parent->children)
// - country indicators and legal-form names in ordered maps
// - normalized legal address -> company indices
//
// The store is write-once: assemble() builds it, everything after is a pure
// read and safe for unlimited concurrent readers.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxgraph/model.hpp"

namespace taxgraph {

// Edge between dense company indices, child -> parent.
struct IndexEdge {
    std::uint32_t child = 0;
    std::uint32_t parent = 0;

    auto operator<=>(const IndexEdge&) const = default;
};

// Counters produced while assembling; ingest folds them into its report.
struct AssemblyCounts {
    std::size_t stubs = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
    std::size_t duplicate_companies_dropped = 0;
    std::size_t dangling_endpoints = 0;  // distinct LEIs promoted to stubs
};

class GraphStore {
public:
    GraphStore() = default;

    GraphStore(const GraphStore&) = delete;
    GraphStore& operator=(const GraphStore&) = delete;
    GraphStore(GraphStore&&) = default;
    GraphStore& operator=(GraphStore&&) = default;

    // Builds the store from parsed inputs. Self-loops and duplicate
    // (child, parent, kind) edges are dropped and counted; dangling edge
    // endpoints become stub companies. Input order does not matter.
    static GraphStore assemble(std::vector<Company> companies,
                               std::vector<RelationshipEdge> edges,
                               std::map<std::string, CountryIndicators> indicators,
                               std::map<std::string, std::string> legal_form_names,
                               AssemblyCounts* counts = nullptr);

    // -- companies ---------------------------------------------------------

    std::size_t company_count() const { return companies_.size(); }
    std::size_t stub_count() const { return stub_count_; }

    const Company& company_at(std::uint32_t index) const { return companies_[index]; }
    std::span<const Company> companies() const { return companies_; }

    std::optional<std::uint32_t> index_of(const Lei& lei) const;
    const Company* find(const Lei& lei) const;

    // Copying lookup per the operation contract; never creates.
    std::optional<Company> get_company(const Lei& lei) const;

    // -- edges -------------------------------------------------------------

    std::size_t edge_count(RelKind kind) const { return edges_[idx(kind)].size(); }

    // Sorted by (child, parent).
    std::span<const IndexEdge> edges(RelKind kind) const { return edges_[idx(kind)]; }

    // Adjacent parents of `company` along `kind` edges, sorted.
    std::span<const std::uint32_t> parents_of(std::uint32_t company, RelKind kind) const;
    // Adjacent children of `company` along `kind` edges, sorted.
    std::span<const std::uint32_t> children_of(std::uint32_t company, RelKind kind) const;

    // -- reference data ----------------------------------------------------

    const std::map<std::string, CountryIndicators>& indicators() const { return indicators_; }
    const CountryIndicators* indicators_for(std::string_view country) const;

    const std::map<std::string, std::string>& legal_form_names() const { return legal_form_names_; }

    // Normalized full legal address -> company indices (sorted). Companies
    // whose normalized address is empty (stubs) are not indexed.
    const std::map<std::string, std::vector<std::uint32_t>>& address_index() const {
        return address_index_;
    }

    // Distinct counts mirroring the ingest report (countries and cities seen
    // across legal + headquarter roles plus indicator rows).
    std::size_t distinct_countries() const { return distinct_countries_; }
    std::size_t distinct_cities() const { return distinct_cities_; }
    std::size_t distinct_legal_forms() const { return distinct_legal_forms_; }

private:
    static constexpr std::size_t idx(RelKind kind) { return static_cast<std::size_t>(kind); }

    struct Csr {
        std::vector<std::uint64_t> offsets;  // company_count + 1
        std::vector<std::uint32_t> targets;
    };

    static Csr build_csr(std::size_t nodes, const std::vector<IndexEdge>& edges, bool by_parent);

    std::vector<Company> companies_;
    std::unordered_map<std::string, std::uint32_t> lei_index_;
    std::size_t stub_count_ = 0;

    std::vector<IndexEdge> edges_[2];
    Csr to_parents_[2];   // keyed by child
    Csr to_children_[2];  // keyed by parent

    std::map<std::string, CountryIndicators> indicators_;
    std::map<std::string, std::string> legal_form_names_;
    std::map<std::string, std::vector<std::uint32_t>> address_index_;

    std::size_t distinct_countries_ = 0;
    std::size_t distinct_cities_ = 0;
    std::size_t distinct_legal_forms_ = 0;
};

}  // namespace taxgraph
