// taxgraph: build a corporate-ownership graph from LEI-style records, detect
// known tax-planning constructs with subgraph patterns, and compute anomaly
// statistics. See README.md for the bundle layout and examples.

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "taxgraph/version.hpp"

namespace cli = taxgraph::cli;

int main(int argc, char** argv) {
    CLI::App app{"corporate ownership knowledge-graph engine"};
    app.set_version_flag("--version", std::string(taxgraph::kToolVersion));
    app.require_subcommand(1);

    int exit_code = cli::kExitOk;

    auto ingest_args = std::make_shared<cli::IngestArgs>();
    {
        CLI::App* cmd = app.add_subcommand("ingest", "parse input CSVs and write a graph bundle");
        cmd->add_option("--entities", ingest_args->entities, "entities.csv")->required();
        cmd->add_option("--relationships", ingest_args->relationships, "relationships.csv")
            ->required();
        cmd->add_option("--indicators", ingest_args->indicators, "indicators.csv")->required();
        cmd->add_option("--legal-forms", ingest_args->legal_forms, "legalforms.csv")->required();
        cmd->add_option("--out", ingest_args->out_dir, "bundle directory")->required();
        cmd->add_flag("--quiet", ingest_args->quiet, "suppress stdout tables");
        cmd->callback([&, ingest_args] { exit_code = cli::run_ingest(*ingest_args); });
    }

    auto link_args = std::make_shared<cli::LinkArgs>();
    {
        CLI::App* cmd = app.add_subcommand("link-cities",
                                           "link city/postal pairs to external city ids");
        cmd->add_option("--graph", link_args->graph_dir, "graph bundle directory")->required();
        cmd->add_option("--candidates", link_args->candidates, "citycandidates.csv")->required();
        cmd->add_option("--threshold", link_args->threshold,
                        "normalized edit distance acceptance threshold");
        cmd->add_flag("--quiet", link_args->quiet, "suppress stdout tables");
        cmd->callback([&, link_args] { exit_code = cli::run_link_cities(*link_args); });
    }

    auto detect_args = std::make_shared<cli::DetectArgs>();
    {
        CLI::App* cmd = app.add_subcommand("detect", "run a subgraph pattern against the graph");
        cmd->add_option("--graph", detect_args->graph_dir, "graph bundle directory")->required();
        cmd->add_option("--builtin", detect_args->builtin, "double-irish | duck-rabbit");
        cmd->add_option("--pattern-file", detect_args->pattern_file, "pattern DSL file");
        cmd->add_flag("--relaxed", detect_args->relaxed,
                      "double-irish: drop the third country constraint");
        cmd->add_option("--havens", detect_args->havens,
                        "duck-rabbit: haven country set (default BM KY)")
            ->delimiter(',');
        cmd->add_option("--country-a", detect_args->country_a, "double-irish: first country");
        cmd->add_option("--country-b", detect_args->country_b, "double-irish: conduit country");
        cmd->add_option("--country-c", detect_args->country_c, "double-irish: third country");
        cmd->add_option("--child-country", detect_args->child_country,
                        "duck-rabbit: child legal country");
        cmd->add_option("--child-form", detect_args->child_form,
                        "duck-rabbit: child legal form (ELF)");
        cmd->add_option("--max-path-len", detect_args->max_path_len,
                        "hop cap for transitive clauses");
        cmd->add_option("--max-results", detect_args->max_results, "result cap (0 = unlimited)");
        cmd->add_option("--out", detect_args->out_path, "bindings CSV path");
        cmd->add_flag("--quiet", detect_args->quiet, "suppress stdout tables");
        cmd->callback([&, detect_args] { exit_code = cli::run_detect(*detect_args); });
    }

    auto stats_args = std::make_shared<cli::StatsArgs>();
    auto stats_kind = std::make_shared<std::string>("direct");
    {
        CLI::App* cmd = app.add_subcommand("stats", "compute an analytics metric");
        cmd->add_option("--graph", stats_args->graph_dir, "graph bundle directory")->required();
        cmd->add_option("--metric", stats_args->metric, "metric name (see docs)")->required();
        cmd->add_option("--top", stats_args->options.top, "truncate rankings to K rows");
        cmd->add_flag("--divergent-only", stats_args->options.divergent_only,
                      "tax-delta-hq-legal: only companies with hq != legal country");
        cmd->add_flag("--multinational-only", stats_args->options.multinational_only,
                      "tax-delta-parent-child: only cross-border edges");
        cmd->add_flag("--by-hq", stats_args->options.by_hq,
                      "attribute companies to the hq country instead of legal");
        cmd->add_option("--country", stats_args->options.country, "region-share: ISO-2 country");
        cmd->add_option("--region", stats_args->options.region, "region-share: subdivision code");
        cmd->add_option("--areas", stats_args->areas_file, "density: externalId,areaSqKm CSV");
        cmd->add_option("--min", stats_args->options.min_companies,
                        "density: keep cities with count > min");
        cmd->add_option("--kind", *stats_kind, "chain metrics: direct | ultimate");
        cmd->add_option("--out", stats_args->out_path, "metric CSV path");
        cmd->add_flag("--quiet", stats_args->quiet, "suppress stdout tables");
        cmd->callback([&, stats_args, stats_kind] {
            if (*stats_kind == "ultimate") {
                stats_args->options.kind = taxgraph::RelKind::ultimate;
            } else if (*stats_kind != "direct") {
                std::cerr << "error: --kind must be direct or ultimate\n";
                exit_code = cli::kExitUsage;
                return;
            }
            exit_code = cli::run_stats(*stats_args);
        });
    }

    auto fetch_args = std::make_shared<cli::FetchAreasArgs>();
    {
        CLI::App* cmd = app.add_subcommand("fetch-areas",
                                           "fetch city areas from a SPARQL endpoint");
        cmd->add_option("--graph", fetch_args->graph_dir, "graph bundle directory")->required();
        cmd->add_option("--endpoint", fetch_args->endpoint, "SPARQL endpoint URL")
            ->envname("TAXGRAPH_ENDPOINT");
        cmd->add_option("--offline", fetch_args->offline_file,
                        "canned SPARQL results JSON instead of the network");
        cmd->add_option("--timeout", fetch_args->timeout_seconds, "per-request timeout, seconds")
            ->envname("TAXGRAPH_TIMEOUT");
        cmd->add_option("--batch", fetch_args->batch, "ids per request");
        cmd->add_option("--retries", fetch_args->retries, "retries per batch");
        cmd->add_option("--parallel", fetch_args->parallelism, "concurrent batch fetches");
        cmd->add_option("--out", fetch_args->out_path, "areas CSV path");
        cmd->add_flag("--quiet", fetch_args->quiet, "suppress stdout tables");
        cmd->callback([&, fetch_args] { exit_code = cli::run_fetch_areas(*fetch_args); });
    }

    auto export_args = std::make_shared<cli::ExportArgs>();
    {
        CLI::App* cmd = app.add_subcommand("export", "write every metric CSV into a directory");
        cmd->add_option("--graph", export_args->graph_dir, "graph bundle directory")->required();
        cmd->add_option("--out", export_args->out_dir, "output directory")->required();
        cmd->add_option("--areas", export_args->areas_file, "enable density with this areas CSV");
        cmd->add_option("--min", export_args->min_companies, "density threshold");
        cmd->add_option("--top", export_args->top, "truncate rankings to K rows");
        cmd->add_flag("--quiet", export_args->quiet, "suppress stdout tables");
        cmd->callback([&, export_args] { exit_code = cli::run_export(*export_args); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? cli::kExitOk : cli::kExitUsage;
    }
    return exit_code;
}
