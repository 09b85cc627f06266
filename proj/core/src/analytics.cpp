#include "taxgraph/analytics.hpp"

#include <algorithm>
#include <tuple>

namespace taxgraph {

namespace {

const std::string& attributed_country(const Company& c, CountryAttribution attribution) {
    return attribution == CountryAttribution::legal ? c.legal_country : c.hq_country;
}

CountryRanking rank_by_denominator(const GraphStore& store, CountryAttribution attribution,
                                   bool per_capita) {
    CountryRanking ranking;

    std::map<std::string, std::size_t> counts;
    for (const Company& c : store.companies()) {
        const std::string& country = attributed_country(c, attribution);
        if (!country.empty()) ++counts[country];
    }

    // Every indicator country with a usable denominator gets a row, even at
    // zero companies; counted countries without one are skipped with a
    // warning.
    std::map<std::string, double> denominators;
    for (const auto& [country, ind] : store.indicators()) {
        if (per_capita) {
            if (ind.population && *ind.population > 0) {
                denominators.emplace(country, static_cast<double>(*ind.population));
            }
        } else {
            if (ind.gdp_million_usd && *ind.gdp_million_usd > 0) {
                denominators.emplace(country, *ind.gdp_million_usd);
            }
        }
    }
    for (const auto& [country, count] : counts) {
        (void)count;
        if (!denominators.contains(country)) ranking.skipped.push_back(country);
    }
    for (const auto& [country, denominator] : denominators) {
        auto it = counts.find(country);
        std::size_t count = it == counts.end() ? 0 : it->second;
        ranking.rows.push_back(
            {country, count, denominator, static_cast<double>(count) / denominator});
    }
    std::sort(ranking.rows.begin(), ranking.rows.end(),
              [](const RankedCountryMetric& a, const RankedCountryMetric& b) {
                  if (a.ratio != b.ratio) return a.ratio > b.ratio;
                  return a.country < b.country;
              });
    return ranking;
}

}  // namespace

CountryRanking companies_per_capita(const GraphStore& store, CountryAttribution attribution) {
    return rank_by_denominator(store, attribution, true);
}

CountryRanking companies_per_gdp(const GraphStore& store, CountryAttribution attribution) {
    return rank_by_denominator(store, attribution, false);
}

std::vector<std::pair<std::string, std::size_t>> address_concentration(const GraphStore& store,
                                                                       std::size_t top_k) {
    std::vector<std::pair<std::string, std::size_t>> rows;
    rows.reserve(store.address_index().size());
    for (const auto& [address, members] : store.address_index()) {
        rows.emplace_back(address, members.size());
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (rows.size() > top_k) rows.resize(top_k);
    return rows;
}

DivergenceResult hq_legal_divergence(const GraphStore& store) {
    DivergenceResult result;
    std::map<std::pair<std::string, std::string>, std::size_t> flows;
    std::map<std::string, std::size_t> legal_counts;
    for (const Company& c : store.companies()) {
        if (c.legal_country.empty() || c.hq_country.empty()) continue;
        ++result.considered;
        if (c.hq_country == c.legal_country) continue;
        ++result.divergent;
        ++flows[{c.hq_country, c.legal_country}];
        ++legal_counts[c.legal_country];
    }
    result.share = result.considered == 0
                       ? 0.0
                       : static_cast<double>(result.divergent) /
                             static_cast<double>(result.considered);
    for (const auto& [pair, count] : flows) result.flows.push_back({pair.first, pair.second, count});
    std::sort(result.flows.begin(), result.flows.end(), [](const FlowRow& a, const FlowRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    result.top_legal.assign(legal_counts.begin(), legal_counts.end());
    std::sort(result.top_legal.begin(), result.top_legal.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    return result;
}

TaxDeltaResult tax_delta_hq_legal(const GraphStore& store, bool divergent_only) {
    TaxDeltaResult result;
    double sum = 0;
    for (const Company& c : store.companies()) {
        if (c.legal_country.empty() || c.hq_country.empty()) continue;
        if (divergent_only && c.legal_country == c.hq_country) continue;
        const CountryIndicators* hq = store.indicators_for(c.hq_country);
        const CountryIndicators* legal = store.indicators_for(c.legal_country);
        if (!hq || !legal || !hq->corporate_tax_rate_pct || !legal->corporate_tax_rate_pct) {
            ++result.excluded;
            continue;
        }
        sum += *hq->corporate_tax_rate_pct - *legal->corporate_tax_rate_pct;
        ++result.samples;
    }
    if (result.samples > 0) result.mean_delta_pp = sum / static_cast<double>(result.samples);
    return result;
}

TaxDeltaResult tax_delta_parent_child(const GraphStore& store, bool multinational_only) {
    TaxDeltaResult result;
    double sum = 0;
    for (const IndexEdge& e : store.edges(RelKind::direct)) {
        const Company& child = store.company_at(e.child);
        const Company& parent = store.company_at(e.parent);
        if (child.legal_country.empty() || parent.legal_country.empty()) continue;
        if (multinational_only && child.legal_country == parent.legal_country) continue;
        const CountryIndicators* parent_ind = store.indicators_for(parent.legal_country);
        const CountryIndicators* child_ind = store.indicators_for(child.legal_country);
        if (!parent_ind || !child_ind || !parent_ind->corporate_tax_rate_pct ||
            !child_ind->corporate_tax_rate_pct) {
            ++result.excluded;
            continue;
        }
        sum += *parent_ind->corporate_tax_rate_pct - *child_ind->corporate_tax_rate_pct;
        ++result.samples;
    }
    if (result.samples > 0) result.mean_delta_pp = sum / static_cast<double>(result.samples);
    return result;
}

RegionShare region_share(const GraphStore& store, std::string_view country,
                         std::string_view region) {
    std::size_t in_country = 0, in_region = 0, hq_in_region = 0;
    for (const Company& c : store.companies()) {
        if (c.legal_country != country) continue;
        ++in_country;
        if (c.legal_region != region) continue;
        ++in_region;
        if (c.hq_country == country && c.hq_region == region) ++hq_in_region;
    }
    if (in_country == 0) {
        throw EmptyDenominatorError("no companies with legal country " + std::string(country));
    }
    RegionShare share;
    share.legal_share = static_cast<double>(in_region) / static_cast<double>(in_country);
    if (in_region > 0) {
        share.hq_share_among_legal =
            static_cast<double>(hq_in_region) / static_cast<double>(in_region);
    }
    return share;
}

EdgeShareResult multinational_edge_share(const GraphStore& store) {
    EdgeShareResult result;
    for (const IndexEdge& e : store.edges(RelKind::direct)) {
        const Company& child = store.company_at(e.child);
        const Company& parent = store.company_at(e.parent);
        if (child.legal_country.empty() || parent.legal_country.empty()) {
            ++result.excluded;
            continue;
        }
        ++result.considered;
        if (child.legal_country != parent.legal_country) ++result.multinational;
    }
    if (result.considered == 0) {
        throw EmptyDenominatorError("no Direct edges with both legal countries present");
    }
    result.ratio =
        static_cast<double>(result.multinational) / static_cast<double>(result.considered);
    return result;
}

CityDensityResult city_density(const GraphStore& store,
                               const std::map<std::string, double>& areas_sq_km,
                               std::size_t min_companies) {
    CityDensityResult result;

    struct CityAgg {
        std::size_t count = 0;
        std::map<std::pair<std::string, std::string>, std::size_t> names;  // (name, country)
    };
    auto rank = [&](bool use_hq) {
        std::map<std::string, CityAgg> agg;
        for (const Company& c : store.companies()) {
            const std::string& link = use_hq ? c.hq_city_link : c.legal_city_link;
            if (link.empty()) continue;
            CityAgg& a = agg[link];
            ++a.count;
            ++a.names[{use_hq ? c.hq_city : c.legal_city,
                       use_hq ? c.hq_country : c.legal_country}];
        }
        std::vector<CityDensityRow> rows;
        for (const auto& [link, a] : agg) {
            if (a.count <= min_companies) continue;
            auto area_it = areas_sq_km.find(link);
            if (area_it == areas_sq_km.end() || area_it->second <= 0) {
                ++result.skipped_no_area;
                continue;
            }
            // Display name: most frequent raw (city, country), ties
            // lexicographic.
            std::pair<std::string, std::string> display;
            std::size_t best = 0;
            for (const auto& [name, count] : a.names) {
                if (count > best) {
                    best = count;
                    display = name;
                }
            }
            rows.push_back({link, display.first, display.second, a.count, area_it->second,
                            static_cast<double>(a.count) / area_it->second});
        }
        std::sort(rows.begin(), rows.end(), [](const CityDensityRow& a, const CityDensityRow& b) {
            if (a.density != b.density) return a.density > b.density;
            return a.city_id < b.city_id;
        });
        return rows;
    };
    result.hq_ranking = rank(true);
    result.legal_ranking = rank(false);
    return result;
}

}  // namespace taxgraph
