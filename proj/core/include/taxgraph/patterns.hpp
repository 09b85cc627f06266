#pragma once
// Subgraph pattern language: parser, canonical printer, matcher, and the
// built-in detectors for the Double Irish and Duck-Rabbit constructs.
//
// Grammar (whitespace-insensitive, '#' starts a line comment):
//   pattern    := stmt+ ;
//   stmt       := constraint ";" | edge ";" ;
//   constraint := VAR "." field "=" VALUE ;
//   field      := "hq" | "legal" | "form" | "region" ;
//   edge       := VAR "-[" kind ("+")? "]->" VAR ;
//   kind       := "direct" | "ultimate" ;
//   VAR        := [a-z][a-z0-9]* ;  VALUE := [A-Z0-9]+ ;
//
// Variables are declared implicitly on first use. An edge clause
// "a -[direct+]-> b" asks for a simple path of 1..max_path_len direct edges
// from a's binding to b's binding (child -> parent direction); without '+'
// exactly one recorded edge. Distinct variables may bind the same company;
// a clause whose two endpoints bind one company then requires a simple cycle
// through it.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "taxgraph/errors.hpp"
#include "taxgraph/graph_store.hpp"

namespace taxgraph {

enum class ConstraintField { hq_country, legal_country, legal_form, region };

const char* constraint_field_name(ConstraintField field);

struct NodeConstraint {
    ConstraintField field = ConstraintField::hq_country;
    std::string value;

    auto operator<=>(const NodeConstraint&) const = default;
};

struct PatternVar {
    std::string name;
    std::vector<NodeConstraint> constraints;

    bool operator==(const PatternVar&) const = default;
};

struct EdgeClause {
    std::uint32_t from = 0;  // index into vars
    std::uint32_t to = 0;
    RelKind kind = RelKind::direct;
    bool transitive = false;

    bool operator==(const EdgeClause&) const = default;
};

struct PatternAst {
    std::vector<PatternVar> vars;    // in first-appearance order
    std::vector<EdgeClause> edges;   // at least one

    const PatternVar& var(std::uint32_t index) const { return vars[index]; }

    // Structural equality; variable declaration order is not significant.
    bool operator==(const PatternAst& other) const;
};

// Throws PatternError with 1-based position and the expected-token set on
// syntax errors, or on a pattern with no edge clause / conflicting
// constraint values for one field.
PatternAst parse_pattern(std::string_view text);

// Canonical form: constraints first (variable order, field order), then edge
// clauses in AST order. parse(print(ast)) == ast.
std::string print_pattern(const PatternAst& ast);

struct MatchLimits {
    int max_path_len = 10;
    std::size_t max_results = std::numeric_limits<std::size_t>::max();
};

struct WitnessPath {
    std::uint32_t clause = 0;     // index into ast.edges; transitive clauses only
    std::vector<Lei> nodes;       // endpoints included; nodes.size() - 1 hops
};

struct Binding {
    std::map<std::string, Lei> vars;
    std::vector<WitnessPath> witness_paths;
};

// All bindings satisfying the pattern, sorted by the tuple of bound LEIs in
// variable-name order, truncated to max_results after sorting.
std::vector<Binding> match_pattern(const GraphStore& store, const PatternAst& ast,
                                   const MatchLimits& limits = {});

// -- built-in detectors (sugar over match_pattern, proven equivalent) -------

struct DoubleIrishParams {
    std::string country_a = "IE";
    std::string country_b = "NL";
    std::optional<std::string> country_c = "IE";  // nullopt = relaxed variant
    int max_path_len = 10;
};

std::string double_irish_pattern_text(const DoubleIrishParams& params);
std::vector<Binding> detect_double_irish(const GraphStore& store,
                                         const DoubleIrishParams& params = {});

struct DuckRabbitParams {
    std::set<std::string> havens = {"BM", "KY"};
    std::string child_country = "NL";
    std::string child_legal_form = "54M6";
    // The BV legal form is a legal-seat property, so the child's country is
    // checked against the legal address by default; switchable to hq.
    bool child_country_is_legal = true;
};

std::string duck_rabbit_pattern_text(const DuckRabbitParams& params, const std::string& haven);
std::vector<Binding> detect_duck_rabbit(const GraphStore& store,
                                        const DuckRabbitParams& params = {});

}  // namespace taxgraph
