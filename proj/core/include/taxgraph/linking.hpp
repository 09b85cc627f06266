#pragma once
// City linking: postal-code candidate retrieval plus normalized edit
// distance with an acceptance threshold.
//
// Candidate entries carry a postal spec that is either a literal code or a
// numeric interval ("10115-14199"). A query code retrieves literal entries by
// exact string match and interval entries by numeric membership, but only
// when the code's digit width equals the interval's ("101" is not inside
// [10115, 14199]).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxgraph/ingest.hpp"
#include "taxgraph/model.hpp"

namespace taxgraph {

inline constexpr double kCityMatchThreshold = 0.3;

struct PostalSpec {
    std::string raw;

    bool is_interval = false;
    // Interval form: equal-width all-digit bounds, low <= high.
    std::uint64_t low = 0;
    std::uint64_t high = 0;
    int digit_width = 0;

    // Literal form: trimmed verbatim code.
    std::string literal;

    bool operator==(const PostalSpec&) const = default;
};

// "D-D" with equal-width all-digit sides and low <= high parses to an
// interval; everything else falls back to a literal.
PostalSpec parse_postal_spec(std::string_view raw);

// Levenshtein over folded code points divided by the longer folded length;
// two empty strings compare as 0.
double normalized_edit_distance(std::string_view a, std::string_view b);

// Plain DP Levenshtein on code points, exposed for reuse and benchmarks.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

struct CityEntry {
    std::string external_id;
    std::string name;
    PostalSpec postal;
};

class CityCandidateIndex {
public:
    static CityCandidateIndex build(std::vector<CityEntry> entries);

    // citycandidates.csv: externalId,cityName,postalSpec
    static CityCandidateIndex from_csv(std::string_view csv, std::vector<RowError>* errors);

    // Entry indices whose postal spec covers `postal`, sorted ascending.
    std::vector<std::uint32_t> candidates_for(std::string_view postal) const;

    const CityEntry& entry(std::uint32_t index) const { return entries_[index]; }
    std::size_t size() const { return entries_.size(); }

private:
    struct IntervalRef {
        std::uint64_t low = 0;
        std::uint64_t high = 0;
        std::uint32_t entry = 0;
    };
    struct WidthBucket {
        std::vector<IntervalRef> by_low;          // sorted by low
        std::vector<std::uint64_t> prefix_max_high;
    };

    std::vector<CityEntry> entries_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> literals_;
    std::map<int, WidthBucket> intervals_;
};

struct CityMatch {
    std::optional<std::string> external_id;
    // Minimum distance over distinct candidates; unset when no candidates.
    std::optional<double> best_distance;
    std::size_t candidates = 0;  // distinct external ids retrieved
    bool ambiguous = false;      // exact tie at the minimum within threshold
};

CityMatch match_city(std::string_view name, std::string_view postal,
                     const CityCandidateIndex& index,
                     double threshold = kCityMatchThreshold);

struct LinkSummary {
    std::size_t legal_linked = 0;
    std::size_t hq_linked = 0;
    std::size_t ambiguous = 0;
    std::size_t unmatched = 0;  // candidates existed, none within threshold
    std::size_t no_candidates = 0;
};

// Fills legal_city_link / hq_city_link on every company with a nonempty
// (city, postal) pair. Pure per company, deterministic.
LinkSummary link_companies(std::vector<Company>& companies, const CityCandidateIndex& index,
                           double threshold = kCityMatchThreshold);

}  // namespace taxgraph
