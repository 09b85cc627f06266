#pragma once
// Exception hierarchy. Most operations are report-style and do not throw;
// throwing is reserved for contract violations the caller cannot recover
// from row by row (bad header, unknown entity, broken bundle).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace taxgraph {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fatal ingestion problems: missing/garbled header, duplicate indicator country.
struct IngestError : Error {
    using Error::Error;
};

// Lookup of a LEI that is not in the store.
struct UnknownEntityError : Error {
    using Error::Error;
};

// Pattern DSL syntax or semantic error, with source position.
struct PatternError : Error {
    PatternError(std::string msg, std::size_t line, std::size_t column,
                 std::vector<std::string> expected = {})
        : Error(std::move(msg)), line(line), column(column),
          expected(std::move(expected)) {}

    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based
    std::vector<std::string> expected;
};

// Structural violation in a SPARQL results document; path is JSONPath-like.
struct SparqlParseError : Error {
    SparqlParseError(std::string msg, std::string path)
        : Error(std::move(msg)), path(std::move(path)) {}

    std::string path;
};

// Graph bundle not loadable: missing file, digest mismatch, bad manifest.
struct BundleError : Error {
    using Error::Error;
};

// A share/ratio was requested over an empty population.
struct EmptyDenominatorError : Error {
    using Error::Error;
};

}  // namespace taxgraph
