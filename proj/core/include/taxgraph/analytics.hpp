#pragma once
// Anomaly and distribution statistics: company density per country, address
// concentration, headquarter/legal divergence, tax-rate deltas, region
// shares and federated city density.
//
// Missing fields exclude rather than zero-fill; every ranking is totally
// ordered (metric descending, then key lexicographic) so output is stable.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taxgraph/errors.hpp"
#include "taxgraph/graph_store.hpp"

namespace taxgraph {

// Which address country a company is attributed to. The registration-centric
// reading (legal) is the default.
enum class CountryAttribution { legal, hq };

struct RankedCountryMetric {
    std::string country;
    std::size_t companies = 0;
    double denominator = 0;  // persons, or million USD
    double ratio = 0;        // companies / denominator
};

struct CountryRanking {
    std::vector<RankedCountryMetric> rows;  // ratio descending, country ascending
    // Countries with >= 1 company but no usable denominator.
    std::vector<std::string> skipped;
};

CountryRanking companies_per_capita(const GraphStore& store,
                                    CountryAttribution attribution = CountryAttribution::legal);
CountryRanking companies_per_gdp(const GraphStore& store,
                                 CountryAttribution attribution = CountryAttribution::legal);

// Top-K normalized legal addresses by company count; ties lexicographic.
std::vector<std::pair<std::string, std::size_t>> address_concentration(const GraphStore& store,
                                                                       std::size_t top_k);

struct FlowRow {
    std::string from;  // hq country
    std::string to;    // legal country
    std::size_t count = 0;
};

struct DivergenceResult {
    std::size_t divergent = 0;
    std::size_t considered = 0;  // companies with both countries present
    double share = 0;
    std::vector<FlowRow> flows;  // count descending, then (from, to)
    std::vector<std::pair<std::string, std::size_t>> top_legal;  // within divergent set
};

DivergenceResult hq_legal_divergence(const GraphStore& store);

struct TaxDeltaResult {
    // Mean of (hq-or-parent rate - legal-or-child rate) in percentage points,
    // so "legal side lower" shows up positive. Absent when nothing qualified.
    std::optional<double> mean_delta_pp;
    std::size_t samples = 0;
    std::size_t excluded = 0;  // qualified but missing a tax rate
};

TaxDeltaResult tax_delta_hq_legal(const GraphStore& store, bool divergent_only);
TaxDeltaResult tax_delta_parent_child(const GraphStore& store, bool multinational_only);

struct RegionShare {
    double legal_share = 0;  // |legal in (country, region)| / |legal in country|
    // Fraction of that numerator set with hq also in (country, region);
    // absent when the numerator is empty.
    std::optional<double> hq_share_among_legal;
};

// Throws EmptyDenominatorError when no company has its legal seat in
// `country`.
RegionShare region_share(const GraphStore& store, std::string_view country,
                         std::string_view region);

struct EdgeShareResult {
    double ratio = 0;  // multinational / considered
    std::size_t multinational = 0;
    std::size_t considered = 0;  // Direct edges with both legal countries present
    std::size_t excluded = 0;
};

// Throws EmptyDenominatorError when no Direct edge is evaluable.
EdgeShareResult multinational_edge_share(const GraphStore& store);

struct CityDensityRow {
    std::string city_id;    // external identifier from linking
    std::string city_name;  // most frequent raw (city, country) among members
    std::string country;
    std::size_t companies = 0;
    double area_sq_km = 0;
    double density = 0;
};

struct CityDensityResult {
    std::vector<CityDensityRow> hq_ranking;     // density descending
    std::vector<CityDensityRow> legal_ranking;
    std::size_t skipped_no_area = 0;  // cities above threshold without an area
};

// Cities with company count strictly greater than min_companies and a known
// positive area; density = count / area.
CityDensityResult city_density(const GraphStore& store,
                               const std::map<std::string, double>& areas_sq_km,
                               std::size_t min_companies);

}  // namespace taxgraph
