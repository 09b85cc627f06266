#pragma once
// Client for a remote SPARQL endpoint, used to pull city areas keyed by
// linked external identifiers.
//
// Remote federation proved slow in practice, so the engine inverts it:
// batch the ids, POST one VALUES query per chunk, join locally. All network
// interaction goes through SparqlTransport so tests (and the CLI's offline
// mode) run against canned responses.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taxgraph/errors.hpp"

namespace taxgraph {

struct EndpointConfig {
    std::string url;
    double timeout_seconds = 30.0;       // > 0
    std::size_t max_ids_per_request = 100;  // >= 1
    int retries = 2;                     // attempts per chunk = retries + 1
    int parallelism = 2;                 // concurrent chunk fetches
};

struct TransportResult {
    bool transport_ok = false;  // false: could not reach the endpoint
    int status = 0;
    std::string body;
    std::string error;
};

class SparqlTransport {
public:
    virtual ~SparqlTransport() = default;

    // POST `query` as application/sparql-query, accepting
    // application/sparql-results+json. Must be callable from multiple
    // threads.
    virtual TransportResult post_query(const std::string& url, const std::string& query,
                                       double timeout_seconds) = 0;
};

// cpp-httplib based transport (https when built with OpenSSL).
class HttpSparqlTransport final : public SparqlTransport {
public:
    TransportResult post_query(const std::string& url, const std::string& query,
                               double timeout_seconds) override;
};

// Serves the content of one canned results file for every request; backs the
// CLI's offline mode.
class CannedSparqlTransport final : public SparqlTransport {
public:
    explicit CannedSparqlTransport(std::string body) : body_(std::move(body)) {}

    TransportResult post_query(const std::string&, const std::string&, double) override {
        return {true, 200, body_, {}};
    }

private:
    std::string body_;
};

// SELECT over the given ids with a VALUES block, retrieving the area
// quantity and its unit. Deterministic text; throws std::invalid_argument on
// an empty id list.
std::string build_area_query(std::span<const std::string> ids);

struct SparqlValue {
    std::string value;
    std::string type;      // "uri", "literal", ...
    std::string datatype;  // optional
    std::optional<double> numeric;  // parsed when the datatype is numeric
};

using SparqlRow = std::map<std::string, SparqlValue>;

struct SparqlResults {
    std::vector<std::string> vars;
    std::vector<SparqlRow> rows;
};

// Standard SPARQL results JSON (head.vars + results.bindings). Structural
// violations throw SparqlParseError carrying a JSONPath-like location.
SparqlResults parse_sparql_results(std::string_view json_text);

struct FetchReport {
    std::size_t batches = 0;
    std::size_t failed_batches = 0;
    std::size_t attempts = 0;  // total HTTP attempts across chunks
    std::vector<std::string> batch_errors;
    std::vector<std::string> duplicate_flagged;  // ids with multiple bindings
    std::vector<std::string> unit_flagged;       // unitless values assumed km^2
    std::vector<std::string> skipped_flagged;    // unconvertible unit or area <= 0
};

// external id -> area in square kilometers. Ids are chunked by
// max_ids_per_request; a failing chunk is recorded and the rest proceed.
// Duplicate bindings for one id keep the largest value. Never returns an id
// that was not requested.
std::map<std::string, double> fetch_areas(const EndpointConfig& config,
                                          SparqlTransport& transport,
                                          std::vector<std::string> ids,
                                          FetchReport* report = nullptr);

}  // namespace taxgraph
