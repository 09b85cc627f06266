#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "taxgraph/bundle.hpp"
#include "taxgraph/csv.hpp"
#include "taxgraph/federation.hpp"
#include "taxgraph/linking.hpp"
#include "taxgraph/patterns.hpp"
#include "taxgraph/sha256.hpp"
#include "taxgraph/version.hpp"

namespace taxgraph::cli {

namespace fs = std::filesystem;

namespace {

std::string slurp_or_fail(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("missing input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

// Manifest next to a single output file: <out>.manifest.json.
void write_output_manifest(const fs::path& out_path, const std::string& command,
                           const std::vector<std::string>& parameters,
                           std::vector<ManifestEntry> inputs) {
    RunManifest manifest;
    manifest.tool = kToolName;
    manifest.version = kToolVersion;
    manifest.command = command;
    manifest.parameters = parameters;
    manifest.inputs = std::move(inputs);
    manifest.outputs.push_back({out_path.filename().string(), sha256_file(out_path)});
    write_manifest(manifest, out_path.string() + ".manifest.json");
}

int guarded(bool quiet, const std::function<int()>& body) {
    (void)quiet;
    try {
        return body();
    } catch (const PatternError& e) {
        std::cerr << "pattern error at line " << e.line << ", column " << e.column << ": "
                  << e.what() << "\n";
        return kExitUsage;
    } catch (const IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BundleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const EmptyDenominatorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

void print_row_errors(const char* file, const std::vector<RowError>& errors) {
    for (const RowError& e : errors) {
        std::cerr << "warning: " << file << " line " << e.line << ": " << e.reason << "\n";
    }
}

std::map<std::string, double> load_areas_csv(const std::string& path) {
    std::string text = slurp_or_fail(path);
    CsvReader reader(text);
    std::vector<std::string> f;
    if (!reader.read_record(f) || f != std::vector<std::string>{"externalId", "areaSqKm"}) {
        throw IngestError("areas: bad header, expected \"externalId,areaSqKm\"");
    }
    std::map<std::string, double> areas;
    while (reader.read_record(f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 2) throw IngestError("areas: bad row at line " +
                                             std::to_string(reader.record_line()));
        try {
            areas[f[0]] = std::stod(f[1]);
        } catch (const std::exception&) {
            throw IngestError("areas: bad number at line " + std::to_string(reader.record_line()));
        }
    }
    return areas;
}

// CSV of bindings: one column per variable (name order) plus a hop count per
// transitive clause.
std::vector<std::vector<std::string>> binding_rows(const PatternAst& ast,
                                                   const std::vector<Binding>& bindings) {
    std::vector<std::string> var_names;
    for (const PatternVar& v : ast.vars) var_names.push_back(v.name);
    std::sort(var_names.begin(), var_names.end());

    std::vector<std::string> header = var_names;
    std::vector<std::uint32_t> transitive_clauses;
    for (std::uint32_t i = 0; i < ast.edges.size(); ++i) {
        if (!ast.edges[i].transitive) continue;
        transitive_clauses.push_back(i);
        std::string column = "pathlen_" + ast.vars[ast.edges[i].from].name + "_" +
                             ast.vars[ast.edges[i].to].name;
        while (std::find(header.begin(), header.end(), column) != header.end()) column += "_";
        header.push_back(column);
    }

    std::vector<std::vector<std::string>> rows{header};
    for (const Binding& b : bindings) {
        std::vector<std::string> row;
        for (const std::string& name : var_names) row.push_back(b.vars.at(name).str());
        for (std::uint32_t clause : transitive_clauses) {
            std::string hops;
            for (const WitnessPath& w : b.witness_paths) {
                if (w.clause == clause) {
                    hops = std::to_string(w.nodes.size() - 1);
                    break;
                }
            }
            row.push_back(hops);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit(const std::vector<std::vector<std::string>>& rows,
          const std::vector<std::string>& notes, const std::string& out_path, bool quiet,
          const std::string& command, const std::vector<std::string>& parameters,
          std::vector<ManifestEntry> inputs) {
    if (!out_path.empty()) {
        write_file(out_path, rows_to_csv(rows));
        write_output_manifest(out_path, command, parameters, std::move(inputs));
    }
    if (!quiet) {
        std::cout << rows_to_table(rows);
        for (const std::string& note : notes) std::cout << note << "\n";
    }
}

}  // namespace

int run_ingest(const IngestArgs& args) {
    return guarded(args.quiet, [&] {
        std::string entities = slurp_or_fail(args.entities);
        std::string relationships = slurp_or_fail(args.relationships);
        std::string indicators = slurp_or_fail(args.indicators);
        std::string legal_forms = slurp_or_fail(args.legal_forms);

        BuildResult built = build_graph_from_csv(entities, relationships, indicators, legal_forms);
        const BuildReport& report = built.report;

        RunManifest stub;
        stub.command = "ingest";
        stub.parameters = {"--entities", args.entities, "--relationships", args.relationships,
                           "--indicators", args.indicators, "--legal-forms", args.legal_forms,
                           "--out", args.out_dir};
        stub.inputs = {{args.entities, sha256_hex(entities)},
                       {args.relationships, sha256_hex(relationships)},
                       {args.indicators, sha256_hex(indicators)},
                       {args.legal_forms, sha256_hex(legal_forms)}};
        write_bundle(args.out_dir, built.store, std::move(stub));

        print_row_errors("entities", report.entity_errors);
        print_row_errors("relationships", report.relationship_errors);
        print_row_errors("indicators", report.indicator_errors);
        print_row_errors("legalforms", report.legal_form_errors);

        if (!args.quiet) {
            std::vector<std::vector<std::string>> rows;
            rows.push_back({"class", "count"});
            rows.push_back({"Company", std::to_string(report.companies)});
            rows.push_back({"Country", std::to_string(report.countries)});
            rows.push_back({"City", std::to_string(report.cities)});
            rows.push_back({"Legal Form", std::to_string(report.legal_forms)});
            rows.push_back({"direct subsidiary", std::to_string(report.direct_edges)});
            rows.push_back({"ultimate subsidiary", std::to_string(report.ultimate_edges)});
            std::cout << rows_to_table(rows);
            std::cout << "stubs: " << report.stubs
                      << "  self-loops dropped: " << report.self_loops_dropped
                      << "  duplicate edges dropped: " << report.duplicate_edges_dropped
                      << "  warnings: " << report.warning_count() << "\n";
            std::cout << "bundle written to " << args.out_dir << "\n";
        }
        return kExitOk;
    });
}

int run_link_cities(const LinkArgs& args) {
    return guarded(args.quiet, [&] {
        std::string candidates_text = slurp_or_fail(args.candidates);
        BundleLoad bundle = load_bundle(args.graph_dir);

        std::vector<RowError> candidate_errors;
        CityCandidateIndex index = CityCandidateIndex::from_csv(candidates_text,
                                                                &candidate_errors);
        print_row_errors("citycandidates", candidate_errors);

        std::vector<Company> companies(bundle.store.companies().begin(),
                                       bundle.store.companies().end());
        LinkSummary summary = link_companies(companies, index, args.threshold);

        update_bundle_city_links(args.graph_dir, companies, "link-cities",
                                 {"--graph", args.graph_dir, "--candidates", args.candidates,
                                  "--threshold", format_double(args.threshold)},
                                 {{args.candidates, sha256_hex(candidates_text)}});

        if (!args.quiet) {
            std::cout << "legal links: " << summary.legal_linked
                      << "  hq links: " << summary.hq_linked
                      << "  ambiguous: " << summary.ambiguous
                      << "  over threshold: " << summary.unmatched
                      << "  no candidates: " << summary.no_candidates << "\n";
        }
        return kExitOk;
    });
}

int run_detect(const DetectArgs& args) {
    return guarded(args.quiet, [&] {
        BundleLoad bundle = load_bundle(args.graph_dir);

        MatchLimits limits;
        limits.max_path_len = args.max_path_len;
        if (args.max_results > 0) limits.max_results = args.max_results;

        PatternAst ast;
        std::vector<Binding> bindings;
        std::vector<std::string> parameters = {"--graph", args.graph_dir};

        if (!args.pattern_file.empty()) {
            std::string text = slurp_or_fail(args.pattern_file);
            ast = parse_pattern(text);
            bindings = match_pattern(bundle.store, ast, limits);
            parameters.insert(parameters.end(), {"--pattern-file", args.pattern_file});
        } else if (args.builtin == "double-irish") {
            DoubleIrishParams params;
            params.country_a = args.country_a;
            params.country_b = args.country_b;
            params.country_c = args.relaxed ? std::nullopt
                                            : std::make_optional(args.country_c);
            params.max_path_len = args.max_path_len;
            ast = parse_pattern(double_irish_pattern_text(params));
            bindings = detect_double_irish(bundle.store, params);
            parameters.insert(parameters.end(), {"--builtin", "double-irish"});
            if (args.relaxed) parameters.emplace_back("--relaxed");
        } else if (args.builtin == "duck-rabbit") {
            DuckRabbitParams params;
            if (!args.havens.empty()) {
                params.havens = std::set<std::string>(args.havens.begin(), args.havens.end());
            }
            params.child_country = args.child_country;
            params.child_legal_form = args.child_form;
            ast = parse_pattern(duck_rabbit_pattern_text(params, *params.havens.begin()));
            bindings = detect_duck_rabbit(bundle.store, params);
            if (args.max_results > 0 && bindings.size() > args.max_results) {
                bindings.resize(args.max_results);
            }
            parameters.insert(parameters.end(), {"--builtin", "duck-rabbit"});
        } else {
            throw std::invalid_argument(
                "detect needs --pattern-file or --builtin double-irish|duck-rabbit");
        }

        auto rows = binding_rows(ast, bindings);
        emit(rows, {std::to_string(bindings.size()) + " match(es)"}, args.out_path, args.quiet,
             "detect", parameters, {});
        return kExitOk;
    });
}

int run_stats(const StatsArgs& args) {
    return guarded(args.quiet, [&] {
        MetricOptions options = args.options;
        if (!args.areas_file.empty()) {
            options.areas = load_areas_csv(args.areas_file);
            options.have_areas = true;
        }
        BundleLoad bundle = load_bundle(args.graph_dir);
        MetricOutput output = run_metric(bundle.store, args.metric, options);
        for (const std::string& warning : output.warnings) {
            std::cerr << "warning: " << warning << "\n";
        }
        emit(output.rows, output.notes, args.out_path, args.quiet, "stats",
             {"--graph", args.graph_dir, "--metric", args.metric}, {});
        return kExitOk;
    });
}

int run_fetch_areas(const FetchAreasArgs& args) {
    return guarded(args.quiet, [&] {
        BundleLoad bundle = load_bundle(args.graph_dir);

        std::set<std::string> id_set;
        for (const Company& c : bundle.store.companies()) {
            if (!c.legal_city_link.empty()) id_set.insert(c.legal_city_link);
            if (!c.hq_city_link.empty()) id_set.insert(c.hq_city_link);
        }
        std::vector<std::string> ids(id_set.begin(), id_set.end());

        std::vector<std::vector<std::string>> rows{{"externalId", "areaSqKm"}};
        if (ids.empty()) {
            std::cerr << "warning: no linked cities in the graph; nothing to fetch\n";
            emit(rows, {"0 areas"}, args.out_path, args.quiet, "fetch-areas",
                 {"--graph", args.graph_dir}, {});
            return kExitOk;
        }

        EndpointConfig config;
        config.url = args.endpoint;
        config.timeout_seconds = args.timeout_seconds;
        config.max_ids_per_request = args.batch;
        config.retries = args.retries;
        config.parallelism = args.parallelism;

        std::unique_ptr<SparqlTransport> transport;
        std::vector<ManifestEntry> inputs;
        if (!args.offline_file.empty()) {
            std::string canned = slurp_or_fail(args.offline_file);
            inputs.push_back({args.offline_file, sha256_hex(canned)});
            transport = std::make_unique<CannedSparqlTransport>(std::move(canned));
        } else if (!config.url.empty()) {
            transport = std::make_unique<HttpSparqlTransport>();
        } else {
            throw std::invalid_argument(
                "no endpoint configured: pass --endpoint, set TAXGRAPH_ENDPOINT, or use --offline");
        }

        FetchReport report;
        std::map<std::string, double> areas = fetch_areas(config, *transport, ids, &report);
        for (const std::string& error : report.batch_errors) {
            std::cerr << "warning: " << error << "\n";
        }
        if (report.batches > 0 && report.failed_batches == report.batches) {
            std::cerr << "error: all " << report.batches << " batches failed\n";
            return kExitRuntime;
        }

        for (const auto& [id, area] : areas) rows.push_back({id, format_double(area)});
        emit(rows,
             {std::to_string(areas.size()) + " areas from " + std::to_string(report.batches) +
              " batch(es)"},
             args.out_path, args.quiet, "fetch-areas", {"--graph", args.graph_dir}, inputs);
        return kExitOk;
    });
}

int run_export(const ExportArgs& args) {
    return guarded(args.quiet, [&] {
        BundleLoad bundle = load_bundle(args.graph_dir);
        fs::create_directories(args.out_dir);

        MetricOptions options;
        options.top = args.top;
        options.min_companies = args.min_companies;
        if (!args.areas_file.empty()) {
            options.areas = load_areas_csv(args.areas_file);
            options.have_areas = true;
        }

        // region-share needs --country/--region, so it is a `stats`-only
        // metric; density needs --areas.
        std::vector<std::string> exported;
        RunManifest manifest;
        manifest.tool = kToolName;
        manifest.version = kToolVersion;
        manifest.command = "export";
        manifest.parameters = {"--graph", args.graph_dir, "--out", args.out_dir};
        for (const std::string& metric : metric_names()) {
            if (metric == "region-share") continue;
            if (metric == "density" && !options.have_areas) continue;
            MetricOutput output = run_metric(bundle.store, metric, options);
            for (const std::string& warning : output.warnings) {
                std::cerr << "warning: " << metric << ": " << warning << "\n";
            }
            fs::path out_path = fs::path(args.out_dir) / (metric + ".csv");
            write_file(out_path, rows_to_csv(output.rows));
            manifest.outputs.push_back({metric + ".csv", sha256_file(out_path)});
            exported.push_back(metric);
        }
        write_manifest(manifest, fs::path(args.out_dir) / "manifest.json");

        if (!args.quiet) {
            std::cout << "exported " << exported.size() << " metrics to " << args.out_dir << "\n";
        }
        return kExitOk;
    });
}

}  // namespace taxgraph::cli
