#pragma once
// Legal Entity Identifier: 20 uppercase alphanumerics, the last two being
// check digits (ISO 17442). Checksum verification uses ISO 7064 MOD 97-10
// over the letter->number expansion; it is reported, never enforced.

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace taxgraph {

class Lei {
public:
    Lei() = default;
    explicit Lei(std::string value) : value_(std::move(value)) {}

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    auto operator<=>(const Lei&) const = default;

private:
    std::string value_;
};

inline std::ostream& operator<<(std::ostream& os, const Lei& lei) {
    return os << lei.str();
}

struct LeiValidity {
    bool well_formed = false;
    // Only present when the string is well formed.
    std::optional<bool> checksum_ok;
};

// Report-style: never throws, never fatal.
LeiValidity validate_lei(std::string_view raw);

}  // namespace taxgraph

template <>
struct std::hash<taxgraph::Lei> {
    std::size_t operator()(const taxgraph::Lei& lei) const noexcept {
        return std::hash<std::string>{}(lei.str());
    }
};
