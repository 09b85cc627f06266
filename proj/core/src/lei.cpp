#include "taxgraph/lei.hpp"

namespace taxgraph {

namespace {

bool is_upper_alnum(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

}  // namespace

LeiValidity validate_lei(std::string_view raw) {
    LeiValidity validity;
    if (raw.size() != 20) return validity;
    for (char c : raw) {
        if (!is_upper_alnum(c)) return validity;
    }
    if (raw[18] < '0' || raw[18] > '9' || raw[19] < '0' || raw[19] > '9') return validity;
    validity.well_formed = true;

    // ISO 7064 MOD 97-10 over the letter->number expansion (A=10 .. Z=35);
    // valid identifiers reduce to 1.
    unsigned rem = 0;
    for (char c : raw) {
        if (c >= '0' && c <= '9') {
            rem = (rem * 10 + static_cast<unsigned>(c - '0')) % 97;
        } else {
            rem = (rem * 100 + static_cast<unsigned>(c - 'A' + 10)) % 97;
        }
    }
    validity.checksum_ok = (rem == 1);
    return validity;
}

}  // namespace taxgraph
