#include "metrics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "taxgraph/csv.hpp"
#include "taxgraph/traversal.hpp"

namespace taxgraph::cli {

namespace {

using Rows = std::vector<std::vector<std::string>>;

void truncate(Rows& rows, std::size_t top) {
    if (top > 0 && rows.size() > top + 1) rows.resize(top + 1);  // keep header
}

std::string fmt(double v) { return format_double(v); }

MetricOutput country_ranking_output(const CountryRanking& ranking, const char* denominator_name,
                                    std::size_t top) {
    MetricOutput out;
    out.rows.push_back({"country", "companies", denominator_name, "ratio"});
    for (const RankedCountryMetric& row : ranking.rows) {
        out.rows.push_back(
            {row.country, std::to_string(row.companies), fmt(row.denominator), fmt(row.ratio)});
    }
    truncate(out.rows, top);
    for (const std::string& country : ranking.skipped) {
        out.warnings.push_back("country " + country + " has companies but no usable " +
                               denominator_name + "; omitted");
    }
    return out;
}

MetricOutput tax_delta_output(const TaxDeltaResult& result) {
    MetricOutput out;
    out.rows.push_back({"meanDeltaPp", "samples", "excluded"});
    out.rows.push_back({result.mean_delta_pp ? fmt(*result.mean_delta_pp) : "",
                        std::to_string(result.samples), std::to_string(result.excluded)});
    if (!result.mean_delta_pp) out.warnings.push_back("no qualifying rows; mean undefined");
    return out;
}

}  // namespace

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {
        "per-capita",         "per-gdp",
        "address-concentration", "divergence",
        "tax-delta-hq-legal", "tax-delta-parent-child",
        "region-share",       "multinational-share",
        "density",            "child-stats",
        "longest-chain",      "chain-histogram",
        "discrepancies",
    };
    return names;
}

MetricOutput run_metric(const GraphStore& store, const std::string& name,
                        const MetricOptions& options) {
    const CountryAttribution attribution =
        options.by_hq ? CountryAttribution::hq : CountryAttribution::legal;

    if (name == "per-capita") {
        return country_ranking_output(companies_per_capita(store, attribution), "population",
                                      options.top);
    }
    if (name == "per-gdp") {
        return country_ranking_output(companies_per_gdp(store, attribution), "gdpMillionUsd",
                                      options.top);
    }
    if (name == "address-concentration") {
        MetricOutput out;
        out.rows.push_back({"address", "companies"});
        std::size_t top = options.top > 0 ? options.top : 20;
        for (const auto& [address, count] : address_concentration(store, top)) {
            out.rows.push_back({address, std::to_string(count)});
        }
        return out;
    }
    if (name == "divergence") {
        MetricOutput out;
        DivergenceResult result = hq_legal_divergence(store);
        out.rows.push_back({"hqCountry", "legalCountry", "count"});
        for (const FlowRow& flow : result.flows) {
            out.rows.push_back({flow.from, flow.to, std::to_string(flow.count)});
        }
        truncate(out.rows, options.top);
        out.notes.push_back("divergent: " + std::to_string(result.divergent) + " of " +
                            std::to_string(result.considered) +
                            " (share " + fmt(result.share) + ")");
        std::string top_legal = "top legal countries:";
        for (std::size_t i = 0; i < result.top_legal.size() && i < 5; ++i) {
            top_legal += " " + result.top_legal[i].first + "=" +
                         std::to_string(result.top_legal[i].second);
        }
        out.notes.push_back(top_legal);
        return out;
    }
    if (name == "tax-delta-hq-legal") {
        return tax_delta_output(tax_delta_hq_legal(store, options.divergent_only));
    }
    if (name == "tax-delta-parent-child") {
        return tax_delta_output(tax_delta_parent_child(store, options.multinational_only));
    }
    if (name == "region-share") {
        if (options.country.empty() || options.region.empty()) {
            throw std::invalid_argument("region-share requires --country and --region");
        }
        RegionShare share = region_share(store, options.country, options.region);
        MetricOutput out;
        out.rows.push_back({"legalShare", "hqShareAmongLegal"});
        out.rows.push_back({fmt(share.legal_share),
                            share.hq_share_among_legal ? fmt(*share.hq_share_among_legal) : ""});
        return out;
    }
    if (name == "multinational-share") {
        EdgeShareResult result = multinational_edge_share(store);
        MetricOutput out;
        out.rows.push_back({"ratio", "multinational", "considered", "excluded"});
        out.rows.push_back({fmt(result.ratio), std::to_string(result.multinational),
                            std::to_string(result.considered), std::to_string(result.excluded)});
        return out;
    }
    if (name == "density") {
        if (!options.have_areas) throw std::invalid_argument("density requires --areas");
        CityDensityResult result = city_density(store, options.areas, options.min_companies);
        MetricOutput out;
        out.rows.push_back(
            {"role", "cityId", "city", "country", "companies", "areaSqKm", "density"});
        auto emit = [&](const char* role, const std::vector<CityDensityRow>& ranking) {
            std::size_t emitted = 0;
            for (const CityDensityRow& row : ranking) {
                if (options.top > 0 && emitted >= options.top) break;
                out.rows.push_back({role, row.city_id, row.city_name, row.country,
                                    std::to_string(row.companies), fmt(row.area_sq_km),
                                    fmt(row.density)});
                ++emitted;
            }
        };
        emit("hq", result.hq_ranking);
        emit("legal", result.legal_ranking);
        if (result.skipped_no_area > 0) {
            out.warnings.push_back(std::to_string(result.skipped_no_area) +
                                   " cities above threshold lack an area; skipped");
        }
        return out;
    }
    if (name == "child-stats") {
        ChildStats stats = child_stats(store);
        MetricOutput out;
        out.rows.push_back({"kind", "childCount", "parents"});
        for (const auto& [count, parents] : stats.histogram_direct) {
            out.rows.push_back({"direct", std::to_string(count), std::to_string(parents)});
        }
        for (const auto& [count, parents] : stats.histogram_ultimate) {
            out.rows.push_back({"ultimate", std::to_string(count), std::to_string(parents)});
        }
        out.notes.push_back("avg direct children: " +
                            (stats.avg_direct ? fmt(*stats.avg_direct) : std::string("n/a")));
        out.notes.push_back("avg ultimate children: " +
                            (stats.avg_ultimate ? fmt(*stats.avg_ultimate) : std::string("n/a")));
        return out;
    }
    if (name == "longest-chain") {
        MetricOutput out;
        out.rows.push_back({"position", "lei"});
        std::vector<Lei> chain = longest_chain(store, options.kind);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            out.rows.push_back({std::to_string(i + 1), chain[i].str()});
        }
        out.notes.push_back("longest " + std::string(rel_kind_name(options.kind)) +
                            " chain spans " + std::to_string(chain.size()) + " companies");
        return out;
    }
    if (name == "chain-histogram") {
        MetricOutput out;
        out.rows.push_back({"hops", "chains"});
        for (const auto& [hops, count] : chain_histogram(store, options.kind)) {
            out.rows.push_back({std::to_string(hops), std::to_string(count)});
        }
        return out;
    }
    if (name == "discrepancies") {
        MetricOutput out;
        out.rows.push_back({"childLei", "ultimateParentLei", "reachableViaDirect"});
        for (const UltimateDiscrepancy& d : ultimate_discrepancies(store)) {
            out.rows.push_back(
                {d.child.str(), d.ultimate_parent.str(), d.reachable_via_direct ? "true" : "false"});
        }
        return out;
    }

    std::string message = "unknown metric \"" + name + "\"; valid metrics:";
    for (const std::string& m : metric_names()) message += " " + m;
    throw std::invalid_argument(message);
}

std::string rows_to_csv(const Rows& rows) {
    std::ostringstream out;
    for (const auto& row : rows) write_csv_row(out, row);
    return out.str();
}

std::string rows_to_table(const Rows& rows) {
    if (rows.empty()) return {};
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            if (i + 1 < row.size()) out.append(widths[i] - row[i].size() + 2, ' ');
        }
        out += '\n';
    }
    return out;
}

}  // namespace taxgraph::cli
