#pragma once
// Table rendering shared by `stats` and `export`: every metric produces a
// grid of cells that serializes both as CSV (stable header, stable order)
// and as an aligned text table for stdout.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "taxgraph/analytics.hpp"
#include "taxgraph/graph_store.hpp"

namespace taxgraph::cli {

struct MetricOptions {
    std::size_t top = 0;  // 0 = unlimited
    bool divergent_only = false;
    bool multinational_only = false;
    bool by_hq = false;  // per-capita / per-gdp attribution switch
    std::string country;
    std::string region;
    std::map<std::string, double> areas;
    bool have_areas = false;
    std::size_t min_companies = 1000;
    RelKind kind = RelKind::direct;
};

struct MetricOutput {
    std::vector<std::vector<std::string>> rows;  // rows[0] = header
    std::vector<std::string> notes;              // summary lines for stdout
    std::vector<std::string> warnings;           // stderr
};

const std::vector<std::string>& metric_names();

// Throws std::invalid_argument for an unknown metric or missing option
// (usage errors); analytics preconditions propagate as taxgraph exceptions.
MetricOutput run_metric(const GraphStore& store, const std::string& name,
                        const MetricOptions& options);

std::string rows_to_csv(const std::vector<std::vector<std::string>>& rows);
std::string rows_to_table(const std::vector<std::vector<std::string>>& rows);

}  // namespace taxgraph::cli
