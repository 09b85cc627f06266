#pragma once
// Text folding used by record linkage and address normalization.
//
// Folding: UTF-8 decode, lowercase, strip combining marks (U+0300..U+036F)
// and decompose precomposed Latin-1 / Latin Extended-A letters to ASCII
// ("Köln" -> "koln", "Ł" -> "l"). Code points outside the covered ranges
// pass through unchanged, so non-Latin scripts still compare exactly.

#include <string>
#include <string_view>

namespace taxgraph {

// Invalid UTF-8 bytes decode to U+FFFD.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view code_points);

// Case-fold + diacritic-strip, as a code point sequence (the unit the edit
// distance operates on).
std::u32string fold_code_points(std::string_view text);

std::string fold_string(std::string_view text);

// Address key: fold, drop punctuation, collapse whitespace runs to single
// spaces, trim.
std::string normalize_address(std::string_view text);

}  // namespace taxgraph
