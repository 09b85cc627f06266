#ifdef TAXGRAPH_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include "taxgraph/federation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace taxgraph {

namespace {

using nlohmann::json;

// Wikidata quantity units convertible to km^2.
std::optional<double> unit_factor(const std::string& unit_uri) {
    auto slash = unit_uri.rfind('/');
    std::string local = slash == std::string::npos ? unit_uri : unit_uri.substr(slash + 1);
    if (local == "Q712226") return 1.0;             // square kilometre
    if (local == "Q25343") return 1e-6;             // square metre
    if (local == "Q35852") return 0.01;             // hectare
    if (local == "Q232291") return 2.589988110336;  // square mile
    return std::nullopt;
}

std::string strip_entity_prefix(const std::string& value) {
    auto slash = value.rfind('/');
    return slash == std::string::npos ? value : value.substr(slash + 1);
}

bool numeric_datatype(const std::string& datatype) {
    for (const char* suffix : {"#integer", "#decimal", "#double", "#float", "#int", "#long"}) {
        if (datatype.ends_with(suffix)) return true;
    }
    return false;
}

struct ChunkOutcome {
    bool ok = false;
    std::size_t attempts = 0;
    std::string error;
    // (id, area_km2, had_unit)
    std::vector<std::tuple<std::string, double, bool>> values;
    std::vector<std::string> skipped;
};

ChunkOutcome fetch_chunk(const EndpointConfig& config, SparqlTransport& transport,
                         std::span<const std::string> ids) {
    ChunkOutcome outcome;
    std::string query = build_area_query(ids);

    TransportResult response;
    for (int attempt = 0; attempt <= config.retries; ++attempt) {
        ++outcome.attempts;
        response = transport.post_query(config.url, query, config.timeout_seconds);
        if (response.transport_ok && response.status == 200) break;
    }
    if (!response.transport_ok) {
        outcome.error = "transport failure: " + response.error;
        return outcome;
    }
    if (response.status != 200) {
        outcome.error = "http status " + std::to_string(response.status);
        return outcome;
    }

    SparqlResults results;
    try {
        results = parse_sparql_results(response.body);
    } catch (const SparqlParseError& e) {
        outcome.error = std::string("malformed results: ") + e.what() + " at " + e.path;
        return outcome;
    }

    for (const SparqlRow& row : results.rows) {
        auto id_it = row.find("id");
        auto area_it = row.find("area");
        if (id_it == row.end() || area_it == row.end()) continue;
        std::string id = strip_entity_prefix(id_it->second.value);

        double amount;
        if (area_it->second.numeric) {
            amount = *area_it->second.numeric;
        } else {
            const std::string& text = area_it->second.value;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), amount);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                outcome.skipped.push_back(id);
                continue;
            }
        }

        bool had_unit = false;
        auto unit_it = row.find("unit");
        if (unit_it != row.end() && !unit_it->second.value.empty() &&
            strip_entity_prefix(unit_it->second.value) != "1") {
            auto factor = unit_factor(unit_it->second.value);
            if (!factor) {
                outcome.skipped.push_back(id);  // unconvertible unit
                continue;
            }
            amount *= *factor;
            had_unit = true;
        }
        if (!(amount > 0) || !std::isfinite(amount)) {
            outcome.skipped.push_back(id);
            continue;
        }
        outcome.values.emplace_back(std::move(id), amount, had_unit);
    }
    outcome.ok = true;
    return outcome;
}

}  // namespace

TransportResult HttpSparqlTransport::post_query(const std::string& url, const std::string& query,
                                                double timeout_seconds) {
    TransportResult result;
    // Split scheme://host[:port] from the path.
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        result.error = "bad endpoint url: " + url;
        return result;
    }
    auto path_start = url.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

#ifndef TAXGRAPH_HAVE_OPENSSL
    if (base.starts_with("https://")) {
        result.error = "https endpoints require an OpenSSL-enabled build";
        return result;
    }
#endif

    httplib::Client client(base);
    auto micros = std::chrono::microseconds(static_cast<long long>(timeout_seconds * 1e6));
    client.set_connection_timeout(micros);
    client.set_read_timeout(micros);
    client.set_write_timeout(micros);
    client.set_default_headers({{"Accept", "application/sparql-results+json"}});

    auto response = client.Post(path, query, "application/sparql-query");
    if (!response) {
        result.error = "request failed: " + httplib::to_string(response.error());
        return result;
    }
    result.transport_ok = true;
    result.status = response->status;
    result.body = response->body;
    return result;
}

std::string build_area_query(std::span<const std::string> ids) {
    if (ids.empty()) throw std::invalid_argument("build_area_query: empty id list");
    std::string query;
    query +=
        "PREFIX wd: <http://www.wikidata.org/entity/>\n"
        "PREFIX p: <http://www.wikidata.org/prop/>\n"
        "PREFIX psv: <http://www.wikidata.org/prop/statement/value/>\n"
        "PREFIX wikibase: <http://wikiba.se/ontology#>\n"
        "SELECT ?id ?area ?unit WHERE {\n"
        "  VALUES ?id {";
    for (const std::string& id : ids) {
        query += " wd:";
        query += id;
    }
    query +=
        " }\n"
        "  ?id p:P2046/psv:P2046 ?quantity .\n"
        "  ?quantity wikibase:quantityAmount ?area .\n"
        "  OPTIONAL { ?quantity wikibase:quantityUnit ?unit }\n"
        "}\n";
    return query;
}

SparqlResults parse_sparql_results(std::string_view json_text) {
    json document = json::parse(json_text, nullptr, false);
    if (document.is_discarded()) throw SparqlParseError("invalid JSON", "$");
    if (!document.is_object()) throw SparqlParseError("document is not an object", "$");

    SparqlResults results;

    auto head = document.find("head");
    if (head == document.end() || !head->is_object()) {
        throw SparqlParseError("missing \"head\" object", "$.head");
    }
    auto vars = head->find("vars");
    if (vars == head->end() || !vars->is_array()) {
        throw SparqlParseError("missing \"head.vars\" array", "$.head.vars");
    }
    for (std::size_t i = 0; i < vars->size(); ++i) {
        const json& v = (*vars)[i];
        if (!v.is_string()) {
            throw SparqlParseError("variable name is not a string",
                                   "$.head.vars[" + std::to_string(i) + "]");
        }
        results.vars.push_back(v.get<std::string>());
    }

    auto body = document.find("results");
    if (body == document.end() || !body->is_object()) {
        throw SparqlParseError("missing \"results\" object", "$.results");
    }
    auto bindings = body->find("bindings");
    if (bindings == body->end() || !bindings->is_array()) {
        throw SparqlParseError("missing \"results.bindings\" array", "$.results.bindings");
    }
    for (std::size_t i = 0; i < bindings->size(); ++i) {
        const json& entry = (*bindings)[i];
        std::string entry_path = "$.results.bindings[" + std::to_string(i) + "]";
        if (!entry.is_object()) throw SparqlParseError("binding is not an object", entry_path);
        SparqlRow row;
        for (auto it = entry.begin(); it != entry.end(); ++it) {
            const json& cell = it.value();
            std::string cell_path = entry_path + "." + it.key();
            if (!cell.is_object()) throw SparqlParseError("cell is not an object", cell_path);
            auto value = cell.find("value");
            if (value == cell.end() || !value->is_string()) {
                throw SparqlParseError("missing \"value\" string", cell_path + ".value");
            }
            SparqlValue parsed;
            parsed.value = value->get<std::string>();
            if (auto type = cell.find("type"); type != cell.end() && type->is_string()) {
                parsed.type = type->get<std::string>();
            }
            if (auto datatype = cell.find("datatype");
                datatype != cell.end() && datatype->is_string()) {
                parsed.datatype = datatype->get<std::string>();
                if (numeric_datatype(parsed.datatype)) {
                    double numeric;
                    auto [ptr, ec] = std::from_chars(
                        parsed.value.data(), parsed.value.data() + parsed.value.size(), numeric);
                    if (ec == std::errc() && ptr == parsed.value.data() + parsed.value.size()) {
                        parsed.numeric = numeric;
                    }
                }
            }
            row.emplace(it.key(), std::move(parsed));
        }
        results.rows.push_back(std::move(row));
    }
    return results;
}

std::map<std::string, double> fetch_areas(const EndpointConfig& config,
                                          SparqlTransport& transport,
                                          std::vector<std::string> ids, FetchReport* report) {
    if (config.max_ids_per_request < 1) {
        throw std::invalid_argument("max_ids_per_request must be >= 1");
    }
    if (!(config.timeout_seconds > 0)) {
        throw std::invalid_argument("timeout_seconds must be > 0");
    }

    FetchReport local_report;
    std::map<std::string, double> areas;
    if (ids.empty()) {
        if (report) *report = local_report;
        return areas;
    }

    std::vector<std::span<const std::string>> chunks;
    for (std::size_t start = 0; start < ids.size(); start += config.max_ids_per_request) {
        std::size_t len = std::min(config.max_ids_per_request, ids.size() - start);
        chunks.emplace_back(ids.data() + start, len);
    }
    local_report.batches = chunks.size();

    std::vector<ChunkOutcome> outcomes(chunks.size());
    std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(
                                                       static_cast<std::size_t>(std::max(
                                                           1, config.parallelism)),
                                                       chunks.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            outcomes[i] = fetch_chunk(config, transport, chunks[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= chunks.size()) break;
                    outcomes[i] = fetch_chunk(config, transport, chunks[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < chunks.size(); ++i) {
        ChunkOutcome& outcome = outcomes[i];
        local_report.attempts += outcome.attempts;
        if (!outcome.ok) {
            ++local_report.failed_batches;
            local_report.batch_errors.push_back("batch " + std::to_string(i) + ": " +
                                                outcome.error);
            continue;
        }
        // Keep only ids requested in this chunk; duplicate bindings keep the
        // largest value and are flagged.
        for (auto& [id, area, had_unit] : outcome.values) {
            bool requested = std::find(chunks[i].begin(), chunks[i].end(), id) != chunks[i].end();
            if (!requested) continue;
            auto [it, inserted] = areas.emplace(id, area);
            if (!inserted) {
                it->second = std::max(it->second, area);
                local_report.duplicate_flagged.push_back(id);
            }
            if (!had_unit) local_report.unit_flagged.push_back(id);
        }
        for (auto& id : outcome.skipped) local_report.skipped_flagged.push_back(std::move(id));
    }
    for (auto* flags : {&local_report.duplicate_flagged, &local_report.unit_flagged,
                        &local_report.skipped_flagged}) {
        std::sort(flags->begin(), flags->end());
        flags->erase(std::unique(flags->begin(), flags->end()), flags->end());
    }

    if (report) *report = std::move(local_report);
    return areas;
}

}  // namespace taxgraph
