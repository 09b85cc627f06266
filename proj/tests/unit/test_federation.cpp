#include <mutex>

#include "doctest.h"
#include "taxgraph/federation.hpp"

using namespace taxgraph;

namespace {

// Records every request; replies from a canned body or a scripted failure
// sequence.
class RecordingTransport : public SparqlTransport {
public:
    explicit RecordingTransport(std::string body, int failures_before_success = 0)
        : body_(std::move(body)), failures_remaining_(failures_before_success) {}

    TransportResult post_query(const std::string&, const std::string& query, double) override {
        std::lock_guard lock(mutex_);
        queries.push_back(query);
        if (failures_remaining_ > 0) {
            --failures_remaining_;
            return {true, 503, "", "unavailable"};
        }
        return {true, 200, body_, {}};
    }

    std::vector<std::string> queries;

private:
    std::mutex mutex_;
    std::string body_;
    int failures_remaining_;
};

std::string results_json(const std::string& bindings) {
    return R"({"head":{"vars":["id","area","unit"]},"results":{"bindings":[)" + bindings + "]}}";
}

std::string area_binding(const std::string& qid, const std::string& value,
                         bool with_unit = true) {
    std::string b = R"({"id":{"type":"uri","value":"http://www.wikidata.org/entity/)" + qid +
                    R"("},"area":{"type":"literal","datatype":"http://www.w3.org/2001/XMLSchema#decimal","value":")" +
                    value + R"("})";
    if (with_unit) {
        b += R"(,"unit":{"type":"uri","value":"http://www.wikidata.org/entity/Q712226"})";
    }
    b += "}";
    return b;
}

}  // namespace

TEST_CASE("build_area_query contains the VALUES block in order") {
    std::vector<std::string> ids = {"Q1844", "Q64"};
    std::string query = build_area_query(ids);
    auto first = query.find("wd:Q1844");
    auto second = query.find("wd:Q64");
    CHECK(first != std::string::npos);
    CHECK(second != std::string::npos);
    CHECK(first < second);
    CHECK(query.find("VALUES ?id") != std::string::npos);
    CHECK(query.find("P2046") != std::string::npos);
    // deterministic text
    CHECK(build_area_query(ids) == query);
    CHECK_THROWS_AS(build_area_query({}), std::invalid_argument);
}

TEST_CASE("parse_sparql_results: minimal document") {
    SparqlResults results = parse_sparql_results(results_json(area_binding("Q1844", "17.30")));
    REQUIRE(results.vars.size() == 3);
    REQUIRE(results.rows.size() == 1);
    const SparqlValue& area = results.rows[0].at("area");
    REQUIRE(area.numeric.has_value());
    CHECK(*area.numeric == doctest::Approx(17.30));
}

TEST_CASE("parse_sparql_results: empty bindings give zero rows") {
    SparqlResults results = parse_sparql_results(results_json(""));
    CHECK(results.rows.empty());
}

TEST_CASE("parse_sparql_results: missing results key errs with a path") {
    try {
        parse_sparql_results(R"({"head":{"vars":[]}})");
        FAIL("expected SparqlParseError");
    } catch (const SparqlParseError& e) {
        CHECK(e.path == "$.results");
    }
    CHECK_THROWS_AS(parse_sparql_results("not json"), SparqlParseError);
    try {
        parse_sparql_results(R"({"head":{"vars":[]},"results":{"bindings":[{"x":5}]}})");
        FAIL("expected SparqlParseError");
    } catch (const SparqlParseError& e) {
        CHECK(e.path == "$.results.bindings[0].x");
    }
}

TEST_CASE("fetch_areas: single area comes back keyed by id") {
    RecordingTransport transport(results_json(area_binding("Q1844", "17.30")));
    EndpointConfig config;
    config.url = "http://endpoint.test/sparql";
    auto areas = fetch_areas(config, transport, {"Q1844"});
    REQUIRE(areas.size() == 1);
    CHECK(areas.at("Q1844") == doctest::Approx(17.30));
}

TEST_CASE("fetch_areas: empty bindings mean no areas and no error") {
    RecordingTransport transport(results_json(""));
    EndpointConfig config;
    config.url = "http://endpoint.test/sparql";
    FetchReport report;
    auto areas = fetch_areas(config, transport, {"Q1", "Q2"}, &report);
    CHECK(areas.empty());
    CHECK(report.failed_batches == 0);
}

TEST_CASE("fetch_areas: duplicate bindings keep the largest and are flagged") {
    RecordingTransport transport(
        results_json(area_binding("Q72", "21.61") + "," + area_binding("Q72", "20.0")));
    EndpointConfig config;
    config.url = "http://endpoint.test/sparql";
    FetchReport report;
    auto areas = fetch_areas(config, transport, {"Q72"}, &report);
    REQUIRE(areas.size() == 1);
    CHECK(areas.at("Q72") == doctest::Approx(21.61));
    REQUIRE(report.duplicate_flagged.size() == 1);
    CHECK(report.duplicate_flagged[0] == "Q72");
}

TEST_CASE("fetch_areas: m^2 converts, unitless is flagged, unknown unit skips") {
    std::string bindings =
        R"({"id":{"type":"uri","value":"http://www.wikidata.org/entity/QM"},"area":{"type":"literal","datatype":"http://www.w3.org/2001/XMLSchema#decimal","value":"2500000"},"unit":{"type":"uri","value":"http://www.wikidata.org/entity/Q25343"}})";
    bindings += "," + area_binding("QU", "5.5", false);
    bindings +=
        R"(,{"id":{"type":"uri","value":"http://www.wikidata.org/entity/QW"},"area":{"type":"literal","datatype":"http://www.w3.org/2001/XMLSchema#decimal","value":"7"},"unit":{"type":"uri","value":"http://www.wikidata.org/entity/Q999999"}})";
    RecordingTransport transport(results_json(bindings));
    EndpointConfig config;
    config.url = "http://endpoint.test/sparql";
    FetchReport report;
    auto areas = fetch_areas(config, transport, {"QM", "QU", "QW"}, &report);
    CHECK(areas.at("QM") == doctest::Approx(2.5));
    CHECK(areas.at("QU") == doctest::Approx(5.5));
    CHECK_FALSE(areas.contains("QW"));
    CHECK(report.unit_flagged == std::vector<std::string>{"QU"});
    CHECK(report.skipped_flagged == std::vector<std::string>{"QW"});
}

TEST_CASE("fetch_areas: chunking issues one request per chunk, union equals unchunked") {
    std::string body = results_json(area_binding("Q1", "1") + "," + area_binding("Q2", "2") +
                                    "," + area_binding("Q3", "3") + "," +
                                    area_binding("Q4", "4") + "," + area_binding("Q5", "5"));
    std::vector<std::string> ids = {"Q1", "Q2", "Q3", "Q4", "Q5"};

    RecordingTransport chunked_transport(body);
    EndpointConfig chunked;
    chunked.url = "http://endpoint.test/sparql";
    chunked.max_ids_per_request = 2;
    chunked.parallelism = 1;
    auto chunked_areas = fetch_areas(chunked, chunked_transport, ids);
    CHECK(chunked_transport.queries.size() == 3);

    RecordingTransport single_transport(body);
    EndpointConfig single;
    single.url = "http://endpoint.test/sparql";
    single.max_ids_per_request = 100;
    auto single_areas = fetch_areas(single, single_transport, ids);
    CHECK(single_transport.queries.size() == 1);
    CHECK(chunked_areas == single_areas);
}

TEST_CASE("fetch_areas: never returns an unrequested id") {
    // Response contains Q9 even though only Q1 was asked for.
    RecordingTransport transport(
        results_json(area_binding("Q1", "1") + "," + area_binding("Q9", "9")));
    EndpointConfig config;
    config.url = "http://endpoint.test/sparql";
    auto areas = fetch_areas(config, transport, {"Q1"});
    CHECK(areas.size() == 1);
    CHECK(areas.contains("Q1"));
}

TEST_CASE("fetch_areas: retries are bounded by retries + 1") {
    RecordingTransport transport(results_json(area_binding("Q1", "1")),
                                 /*failures_before_success=*/10);
    EndpointConfig config;
    config.url = "http://endpoint.test/sparql";
    config.retries = 2;
    config.parallelism = 1;
    FetchReport report;
    auto areas = fetch_areas(config, transport, {"Q1"}, &report);
    CHECK(areas.empty());
    CHECK(transport.queries.size() == 3);  // 1 + 2 retries
    CHECK(report.attempts == 3);
    CHECK(report.failed_batches == 1);
    REQUIRE(report.batch_errors.size() == 1);
}

TEST_CASE("fetch_areas: one failing batch does not stop the others") {
    // First request fails for good, but the canned transport fails globally;
    // emulate per-batch behavior with a transport that fails only once and
    // retries are disabled.
    RecordingTransport transport(results_json(area_binding("Q1", "1") + "," +
                                              area_binding("Q2", "2")),
                                 /*failures_before_success=*/1);
    EndpointConfig config;
    config.url = "http://endpoint.test/sparql";
    config.max_ids_per_request = 1;
    config.retries = 0;
    config.parallelism = 1;
    FetchReport report;
    auto areas = fetch_areas(config, transport, {"Q1", "Q2"}, &report);
    CHECK(report.failed_batches == 1);
    REQUIRE(areas.size() == 1);
    CHECK(areas.contains("Q2"));
}

TEST_CASE("fetch_areas: config invariants") {
    RecordingTransport transport(results_json(""));
    EndpointConfig bad;
    bad.url = "x";
    bad.max_ids_per_request = 0;
    CHECK_THROWS_AS(fetch_areas(bad, transport, {"Q1"}), std::invalid_argument);
    EndpointConfig bad_timeout;
    bad_timeout.url = "x";
    bad_timeout.timeout_seconds = 0;
    CHECK_THROWS_AS(fetch_areas(bad_timeout, transport, {"Q1"}), std::invalid_argument);
}
