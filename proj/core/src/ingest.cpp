#include "taxgraph/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "taxgraph/csv.hpp"

namespace taxgraph {

namespace {

std::vector<std::string> split_header(std::string_view header) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = header.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(header.substr(start));
            break;
        }
        out.emplace_back(header.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

// Reads and checks the header record; throws IngestError on mismatch.
void expect_header(CsvReader& reader, std::vector<std::string>& fields,
                   std::string_view expected, std::string_view file_kind) {
    if (!reader.read_record(fields)) {
        throw IngestError(std::string(file_kind) + ": missing header");
    }
    std::vector<std::string> expected_fields = split_header(expected);
    if (fields != expected_fields) {
        throw IngestError(std::string(file_kind) + ": bad header, expected \"" +
                          std::string(expected) + "\"");
    }
}

bool blank_record(const std::vector<std::string>& fields) {
    return fields.size() == 1 && fields[0].empty();
}

bool valid_country_cell(const std::string& cell) {
    if (cell.empty()) return true;
    return cell.size() == 2 && cell[0] >= 'A' && cell[0] <= 'Z' && cell[1] >= 'A' &&
           cell[1] <= 'Z';
}

std::optional<double> parse_number(const std::string& cell) {
    double value = 0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

}  // namespace

EntitiesParse parse_entities(std::string_view csv) {
    EntitiesParse result;
    CsvReader reader(csv);
    std::vector<std::string> f;
    expect_header(reader, f, kEntitiesHeader, "entities");

    std::unordered_set<std::string> seen;
    while (reader.read_record(f)) {
        if (blank_record(f)) continue;
        ++result.data_rows;
        std::size_t line = reader.record_line();
        if (f.size() != 13) {
            result.errors.push_back({line, "column count"});
            continue;
        }
        LeiValidity validity = validate_lei(f[0]);
        if (f[0].empty()) {
            result.errors.push_back({line, "empty lei"});
            continue;
        }
        if (!validity.well_formed) {
            result.errors.push_back({line, "malformed lei"});
            continue;
        }
        if (!seen.insert(f[0]).second) {
            result.errors.push_back({line, "duplicate lei"});
            continue;
        }
        if (!valid_country_cell(f[2]) || !valid_country_cell(f[7])) {
            result.errors.push_back({line, "bad country code"});
            continue;
        }
        Company c;
        c.lei = Lei(f[0]);
        c.legal_name = f[1];
        c.legal_country = f[2];
        c.legal_region = f[3];
        c.legal_city = f[4];
        c.legal_postal = f[5];
        c.legal_address_line = f[6];
        c.hq_country = f[7];
        c.hq_region = f[8];
        c.hq_city = f[9];
        c.hq_postal = f[10];
        c.hq_address_line = f[11];
        c.legal_form_code = f[12];
        c.lei_checksum_ok = validity.checksum_ok;
        result.companies.push_back(std::move(c));
    }
    return result;
}

RelationshipsParse parse_relationships(std::string_view csv) {
    RelationshipsParse result;
    CsvReader reader(csv);
    std::vector<std::string> f;
    expect_header(reader, f, kRelationshipsHeader, "relationships");

    while (reader.read_record(f)) {
        if (blank_record(f)) continue;
        ++result.data_rows;
        std::size_t line = reader.record_line();
        if (f.size() != 3) {
            result.errors.push_back({line, "column count"});
            continue;
        }
        if (f[0].empty() || f[1].empty()) {
            result.errors.push_back({line, "empty lei"});
            continue;
        }
        if (!validate_lei(f[0]).well_formed || !validate_lei(f[1]).well_formed) {
            result.errors.push_back({line, "malformed lei"});
            continue;
        }
        RelKind kind;
        if (f[2] == "IS_DIRECTLY_CONSOLIDATED_BY") {
            kind = RelKind::direct;
        } else if (f[2] == "IS_ULTIMATELY_CONSOLIDATED_BY") {
            kind = RelKind::ultimate;
        } else {
            result.errors.push_back({line, "unknown relationship type"});
            continue;
        }
        if (f[0] == f[1]) {
            ++result.self_loops_dropped;
            continue;
        }
        result.edges.push_back({Lei(f[0]), Lei(f[1]), kind});
    }
    return result;
}

IndicatorsParse parse_indicators(std::string_view csv) {
    IndicatorsParse result;
    CsvReader reader(csv);
    std::vector<std::string> f;
    expect_header(reader, f, kIndicatorsHeader, "indicators");

    while (reader.read_record(f)) {
        if (blank_record(f)) continue;
        ++result.data_rows;
        std::size_t line = reader.record_line();
        if (f.size() != 4) {
            result.errors.push_back({line, "column count"});
            continue;
        }
        if (!valid_country_cell(f[0]) || f[0].empty()) {
            result.errors.push_back({line, "bad country code"});
            continue;
        }
        if (result.indicators.contains(f[0])) {
            // Two rows for one country make the ground truth ambiguous.
            throw IngestError("indicators: duplicate country " + f[0] + " at line " +
                              std::to_string(line));
        }
        CountryIndicators ind;
        ind.country = f[0];
        bool row_ok = true;
        if (!f[1].empty()) {
            auto population = parse_number(f[1]);
            if (!population || *population < 0 ||
                *population != static_cast<double>(static_cast<std::int64_t>(*population))) {
                result.errors.push_back({line, "population not numeric"});
                row_ok = false;
            } else {
                ind.population = static_cast<std::int64_t>(*population);
            }
        }
        if (row_ok && !f[2].empty()) {
            auto gdp = parse_number(f[2]);
            if (!gdp || *gdp < 0) {
                result.errors.push_back({line, "gdp not numeric"});
                row_ok = false;
            } else {
                ind.gdp_million_usd = *gdp;
            }
        }
        if (row_ok && !f[3].empty()) {
            auto rate = parse_number(f[3]);
            if (!rate || *rate < 0 || *rate > 100) {
                result.errors.push_back({line, "tax rate out of range"});
                row_ok = false;
            } else {
                ind.corporate_tax_rate_pct = *rate;
            }
        }
        if (row_ok) result.indicators.emplace(ind.country, std::move(ind));
    }
    return result;
}

LegalFormsParse parse_legal_forms(std::string_view csv) {
    LegalFormsParse result;
    CsvReader reader(csv);
    std::vector<std::string> f;
    expect_header(reader, f, kLegalFormsHeader, "legalforms");

    while (reader.read_record(f)) {
        if (blank_record(f)) continue;
        ++result.data_rows;
        std::size_t line = reader.record_line();
        if (f.size() != 2) {
            result.errors.push_back({line, "column count"});
            continue;
        }
        if (f[0].empty()) {
            result.errors.push_back({line, "empty elf code"});
            continue;
        }
        if (!result.names.emplace(f[0], f[1]).second) {
            result.errors.push_back({line, "duplicate elf code"});
        }
    }
    return result;
}

BuildResult build_graph(std::vector<Company> companies,
                        std::vector<RelationshipEdge> edges,
                        std::map<std::string, CountryIndicators> indicators,
                        std::map<std::string, std::string> legal_form_names) {
    BuildResult result;
    AssemblyCounts counts;
    result.store = GraphStore::assemble(std::move(companies), std::move(edges),
                                        std::move(indicators), std::move(legal_form_names),
                                        &counts);
    BuildReport& report = result.report;
    report.companies = result.store.company_count();
    report.stubs = counts.stubs;
    report.countries = result.store.distinct_countries();
    report.cities = result.store.distinct_cities();
    report.legal_forms = result.store.distinct_legal_forms();
    report.direct_edges = result.store.edge_count(RelKind::direct);
    report.ultimate_edges = result.store.edge_count(RelKind::ultimate);
    report.self_loops_dropped = counts.self_loops_dropped;
    report.duplicate_edges_dropped = counts.duplicate_edges_dropped;
    report.duplicate_companies_dropped = counts.duplicate_companies_dropped;
    return result;
}

BuildResult build_graph_from_csv(std::string_view entities_csv,
                                 std::string_view relationships_csv,
                                 std::string_view indicators_csv,
                                 std::string_view legal_forms_csv) {
    EntitiesParse entities = parse_entities(entities_csv);
    RelationshipsParse relationships = parse_relationships(relationships_csv);
    IndicatorsParse indicators = parse_indicators(indicators_csv);
    LegalFormsParse legal_forms = parse_legal_forms(legal_forms_csv);

    BuildResult result = build_graph(std::move(entities.companies), std::move(relationships.edges),
                                     std::move(indicators.indicators),
                                     std::move(legal_forms.names));
    result.report.self_loops_dropped += relationships.self_loops_dropped;
    result.report.entity_errors = std::move(entities.errors);
    result.report.relationship_errors = std::move(relationships.errors);
    result.report.indicator_errors = std::move(indicators.errors);
    result.report.legal_form_errors = std::move(legal_forms.errors);
    return result;
}

void write_entities_csv(const GraphStore& store, std::ostream& out) {
    out << kEntitiesHeader << '\n';
    std::vector<std::string> row(13);
    for (const Company& c : store.companies()) {
        if (c.stub) continue;
        row[0] = c.lei.str();
        row[1] = c.legal_name;
        row[2] = c.legal_country;
        row[3] = c.legal_region;
        row[4] = c.legal_city;
        row[5] = c.legal_postal;
        row[6] = c.legal_address_line;
        row[7] = c.hq_country;
        row[8] = c.hq_region;
        row[9] = c.hq_city;
        row[10] = c.hq_postal;
        row[11] = c.hq_address_line;
        row[12] = c.legal_form_code;
        write_csv_row(out, row);
    }
}

void write_relationships_csv(const GraphStore& store, std::ostream& out) {
    out << kRelationshipsHeader << '\n';
    std::vector<std::string> row(3);
    for (auto kind : {RelKind::direct, RelKind::ultimate}) {
        for (const IndexEdge& e : store.edges(kind)) {
            row[0] = store.company_at(e.child).lei.str();
            row[1] = store.company_at(e.parent).lei.str();
            row[2] = kind == RelKind::direct ? "IS_DIRECTLY_CONSOLIDATED_BY"
                                             : "IS_ULTIMATELY_CONSOLIDATED_BY";
            write_csv_row(out, row);
        }
    }
}

void write_indicators_csv(const GraphStore& store, std::ostream& out) {
    out << kIndicatorsHeader << '\n';
    std::vector<std::string> row(4);
    for (const auto& [country, ind] : store.indicators()) {
        row[0] = country;
        row[1] = ind.population ? std::to_string(*ind.population) : "";
        row[2] = ind.gdp_million_usd ? format_double(*ind.gdp_million_usd) : "";
        row[3] = ind.corporate_tax_rate_pct ? format_double(*ind.corporate_tax_rate_pct) : "";
        write_csv_row(out, row);
    }
}

void write_legal_forms_csv(const GraphStore& store, std::ostream& out) {
    out << kLegalFormsHeader << '\n';
    std::vector<std::string> row(2);
    for (const auto& [code, name] : store.legal_form_names()) {
        row[0] = code;
        row[1] = name;
        write_csv_row(out, row);
    }
}

}  // namespace taxgraph
