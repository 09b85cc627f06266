#pragma once
// Domain records shared by every module: companies, consolidation edges and
// per-country indicators.

#include <cstdint>
#include <optional>
#include <string>

#include "taxgraph/lei.hpp"

namespace taxgraph {

enum class RelKind : std::uint8_t { direct = 0, ultimate = 1 };

inline constexpr const char* rel_kind_name(RelKind kind) {
    return kind == RelKind::direct ? "direct" : "ultimate";
}

// One legal entity with its legal and headquarter addresses.
// Stub companies are synthesized from dangling relationship endpoints and
// carry empty address fields.
struct Company {
    Lei lei;
    std::string legal_name;

    std::string legal_country;  // ISO-2, may be empty (= unknown)
    std::string legal_region;   // subdivision code, optional
    std::string legal_city;
    std::string legal_postal;
    std::string legal_address_line;

    std::string hq_country;
    std::string hq_region;
    std::string hq_city;
    std::string hq_postal;
    std::string hq_address_line;

    std::string legal_form_code;  // 4-char ELF code, stored verbatim

    // External city identifiers produced by the linking module; empty when
    // unlinked.
    std::string legal_city_link;
    std::string hq_city_link;

    bool stub = false;
    std::optional<bool> lei_checksum_ok;

    bool operator==(const Company&) const = default;
};

// Directed consolidation edge, child -> parent.
struct RelationshipEdge {
    Lei child;
    Lei parent;
    RelKind kind = RelKind::direct;

    auto operator<=>(const RelationshipEdge&) const = default;
};

struct CountryIndicators {
    std::string country;  // ISO-2
    std::optional<std::int64_t> population;
    std::optional<double> gdp_million_usd;
    std::optional<double> corporate_tax_rate_pct;  // 0..100

    bool operator==(const CountryIndicators&) const = default;
};

}  // namespace taxgraph
