#pragma once
// Parsers for the four input CSVs and graph assembly.
//
// All parsers are report-style: malformed rows are collected as
// (line, reason) and skipped. Only a missing or garbled header — and a
// duplicate indicator country, which makes the ground truth ambiguous — is
// fatal (IngestError).

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "taxgraph/errors.hpp"
#include "taxgraph/graph_store.hpp"
#include "taxgraph/model.hpp"

namespace taxgraph {

struct RowError {
    std::size_t line = 0;  // 1-based physical line in the input
    std::string reason;

    bool operator==(const RowError&) const = default;
};

inline constexpr std::string_view kEntitiesHeader =
    "lei,legalName,legalCountry,legalRegion,legalCity,legalPostal,legalAddressLine,"
    "hqCountry,hqRegion,hqCity,hqPostal,hqAddressLine,legalFormCode";
inline constexpr std::string_view kRelationshipsHeader = "childLei,parentLei,relationshipType";
inline constexpr std::string_view kIndicatorsHeader =
    "country,population,gdpMillionUsd,corporateTaxRatePct";
inline constexpr std::string_view kLegalFormsHeader = "elfCode,name";

struct EntitiesParse {
    std::vector<Company> companies;
    std::vector<RowError> errors;
    std::size_t data_rows = 0;  // rows after the header
};

struct RelationshipsParse {
    std::vector<RelationshipEdge> edges;
    std::vector<RowError> errors;
    std::size_t self_loops_dropped = 0;
    std::size_t data_rows = 0;
};

struct IndicatorsParse {
    std::map<std::string, CountryIndicators> indicators;
    std::vector<RowError> errors;
    std::size_t data_rows = 0;
};

struct LegalFormsParse {
    std::map<std::string, std::string> names;
    std::vector<RowError> errors;
    std::size_t data_rows = 0;
};

EntitiesParse parse_entities(std::string_view csv);
RelationshipsParse parse_relationships(std::string_view csv);
IndicatorsParse parse_indicators(std::string_view csv);
LegalFormsParse parse_legal_forms(std::string_view csv);

// Build report in the shape of the knowledge-graph contents table:
// class counts, relation counts, and everything dropped on the way.
struct BuildReport {
    std::size_t companies = 0;  // including stubs
    std::size_t stubs = 0;
    std::size_t countries = 0;
    std::size_t cities = 0;
    std::size_t legal_forms = 0;

    std::size_t direct_edges = 0;
    std::size_t ultimate_edges = 0;

    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
    std::size_t duplicate_companies_dropped = 0;

    std::vector<RowError> entity_errors;
    std::vector<RowError> relationship_errors;
    std::vector<RowError> indicator_errors;
    std::vector<RowError> legal_form_errors;

    std::size_t warning_count() const {
        return entity_errors.size() + relationship_errors.size() + indicator_errors.size() +
               legal_form_errors.size();
    }
};

struct BuildResult {
    GraphStore store;
    BuildReport report;
};

BuildResult build_graph(std::vector<Company> companies,
                        std::vector<RelationshipEdge> edges,
                        std::map<std::string, CountryIndicators> indicators,
                        std::map<std::string, std::string> legal_form_names);

// End-to-end: parse all four documents, merge row errors, assemble.
BuildResult build_graph_from_csv(std::string_view entities_csv,
                                 std::string_view relationships_csv,
                                 std::string_view indicators_csv,
                                 std::string_view legal_forms_csv);

// Normalized serialization (sorted, quoting-safe). Stub companies are not
// written: they are re-derived from relationships on the next ingest.
void write_entities_csv(const GraphStore& store, std::ostream& out);
void write_relationships_csv(const GraphStore& store, std::ostream& out);
void write_indicators_csv(const GraphStore& store, std::ostream& out);
void write_legal_forms_csv(const GraphStore& store, std::ostream& out);

}  // namespace taxgraph
