#include "taxgraph/linking.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "taxgraph/csv.hpp"
#include "taxgraph/text.hpp"

namespace taxgraph {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::uint64_t> digits_value(std::string_view s) {
    if (s.size() > 18) return std::nullopt;  // keep within uint64
    std::uint64_t value = 0;
    for (char c : s) value = value * 10 + static_cast<std::uint64_t>(c - '0');
    return value;
}

}  // namespace

PostalSpec parse_postal_spec(std::string_view raw) {
    PostalSpec spec;
    spec.raw = std::string(raw);
    std::string_view trimmed = trim(raw);
    spec.literal = std::string(trimmed);

    std::size_t dash = trimmed.find('-');
    if (dash != std::string_view::npos) {
        std::string_view lo = trimmed.substr(0, dash);
        std::string_view hi = trimmed.substr(dash + 1);
        if (lo.size() == hi.size() && all_digits(lo) && all_digits(hi)) {
            auto low = digits_value(lo);
            auto high = digits_value(hi);
            if (low && high && *low <= *high) {
                spec.is_interval = true;
                spec.low = *low;
                spec.high = *high;
                spec.digit_width = static_cast<int>(lo.size());
                return spec;
            }
        }
    }
    return spec;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> curr(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 0; i < a.size(); ++i) {
        curr[0] = i + 1;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t deletion = prev[j + 1] + 1;
            std::size_t insertion = curr[j] + 1;
            std::size_t substitution = prev[j] + (a[i] == b[j] ? 0 : 1);
            curr[j + 1] = std::min({deletion, insertion, substitution});
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

double normalized_edit_distance(std::string_view a, std::string_view b) {
    std::u32string fa = fold_code_points(a);
    std::u32string fb = fold_code_points(b);
    std::size_t longer = std::max(fa.size(), fb.size());
    if (longer == 0) return 0.0;
    return static_cast<double>(levenshtein(fa, fb)) / static_cast<double>(longer);
}

CityCandidateIndex CityCandidateIndex::build(std::vector<CityEntry> entries) {
    CityCandidateIndex index;
    index.entries_ = std::move(entries);
    for (std::uint32_t i = 0; i < index.entries_.size(); ++i) {
        const PostalSpec& spec = index.entries_[i].postal;
        if (spec.is_interval) {
            index.intervals_[spec.digit_width].by_low.push_back({spec.low, spec.high, i});
        } else if (!spec.literal.empty()) {
            index.literals_[spec.literal].push_back(i);
        }
    }
    for (auto& [width, bucket] : index.intervals_) {
        std::sort(bucket.by_low.begin(), bucket.by_low.end(),
                  [](const IntervalRef& a, const IntervalRef& b) {
                      return std::tie(a.low, a.high, a.entry) < std::tie(b.low, b.high, b.entry);
                  });
        bucket.prefix_max_high.resize(bucket.by_low.size());
        std::uint64_t running = 0;
        for (std::size_t k = 0; k < bucket.by_low.size(); ++k) {
            running = std::max(running, bucket.by_low[k].high);
            bucket.prefix_max_high[k] = running;
        }
    }
    return index;
}

CityCandidateIndex CityCandidateIndex::from_csv(std::string_view csv,
                                                std::vector<RowError>* errors) {
    CsvReader reader(csv);
    std::vector<std::string> f;
    if (!reader.read_record(f) || f != std::vector<std::string>{"externalId", "cityName",
                                                                "postalSpec"}) {
        throw IngestError("citycandidates: bad header, expected \"externalId,cityName,postalSpec\"");
    }
    std::vector<CityEntry> entries;
    while (reader.read_record(f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 3 || f[0].empty() || f[1].empty()) {
            if (errors) errors->push_back({reader.record_line(), "bad candidate row"});
            continue;
        }
        entries.push_back({f[0], f[1], parse_postal_spec(f[2])});
    }
    return build(std::move(entries));
}

std::vector<std::uint32_t> CityCandidateIndex::candidates_for(std::string_view postal) const {
    std::vector<std::uint32_t> hits;
    std::string_view code = trim(postal);
    if (code.empty()) return hits;

    if (auto it = literals_.find(std::string(code)); it != literals_.end()) {
        hits.insert(hits.end(), it->second.begin(), it->second.end());
    }
    if (all_digits(code)) {
        if (auto value = digits_value(code)) {
            auto bucket_it = intervals_.find(static_cast<int>(code.size()));
            if (bucket_it != intervals_.end()) {
                const WidthBucket& bucket = bucket_it->second;
                // Entries sorted by low; walk left from the last low <= code,
                // stopping once even the running max high falls short.
                auto upper = std::upper_bound(
                    bucket.by_low.begin(), bucket.by_low.end(), *value,
                    [](std::uint64_t v, const IntervalRef& ref) { return v < ref.low; });
                for (auto it = upper; it != bucket.by_low.begin();) {
                    --it;
                    std::size_t k = static_cast<std::size_t>(it - bucket.by_low.begin());
                    if (bucket.prefix_max_high[k] < *value) break;
                    if (it->high >= *value) hits.push_back(it->entry);
                }
            }
        }
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    return hits;
}

CityMatch match_city(std::string_view name, std::string_view postal,
                     const CityCandidateIndex& index, double threshold) {
    CityMatch match;
    std::vector<std::uint32_t> hits = index.candidates_for(postal);
    if (hits.empty()) return match;

    // One distance per distinct external id (an id can appear once per
    // postal spec); keep its minimum.
    std::map<std::string, double> by_id;
    for (std::uint32_t entry_index : hits) {
        const CityEntry& entry = index.entry(entry_index);
        double d = normalized_edit_distance(name, entry.name);
        auto [it, inserted] = by_id.emplace(entry.external_id, d);
        if (!inserted) it->second = std::min(it->second, d);
    }
    match.candidates = by_id.size();

    const std::string* winner = nullptr;
    double best = 0;
    bool tie = false;
    for (const auto& [id, d] : by_id) {
        if (!match.best_distance || d < *match.best_distance) match.best_distance = d;
        if (d > threshold) continue;
        if (!winner || d < best) {
            winner = &id;
            best = d;
            tie = false;
        } else if (d == best) {
            tie = true;
        }
    }
    if (winner && !tie) {
        match.external_id = *winner;
    } else if (winner && tie) {
        match.ambiguous = true;
    }
    return match;
}

LinkSummary link_companies(std::vector<Company>& companies, const CityCandidateIndex& index,
                           double threshold) {
    LinkSummary summary;
    auto link_one = [&](const std::string& city, const std::string& postal,
                        std::string& out_link) -> bool {
        if (city.empty() || postal.empty()) return false;
        CityMatch match = match_city(city, postal, index, threshold);
        if (match.external_id) {
            out_link = *match.external_id;
            return true;
        }
        if (match.ambiguous) {
            ++summary.ambiguous;
        } else if (match.candidates > 0) {
            ++summary.unmatched;
        } else {
            ++summary.no_candidates;
        }
        return false;
    };
    for (Company& c : companies) {
        if (link_one(c.legal_city, c.legal_postal, c.legal_city_link)) ++summary.legal_linked;
        if (link_one(c.hq_city, c.hq_postal, c.hq_city_link)) ++summary.hq_linked;
    }
    return summary;
}

}  // namespace taxgraph
