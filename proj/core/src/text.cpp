#include "taxgraph/text.hpp"

#include <array>
#include <cstdint>

namespace taxgraph {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Folded ASCII expansion for U+00C0..U+00FF; nullptr = pass through.
constexpr std::array<const char*, 64> kLatin1Fold = {
    "a", "a", "a", "a", "a", "a", "ae", "c",   // C0-C7
    "e", "e", "e", "e", "i", "i", "i", "i",    // C8-CF
    "d", "n", "o", "o", "o", "o", "o", nullptr,  // D0-D7 (D7 = multiplication sign)
    "o", "u", "u", "u", "u", "y", "th", "ss",  // D8-DF
    "a", "a", "a", "a", "a", "a", "ae", "c",   // E0-E7
    "e", "e", "e", "e", "i", "i", "i", "i",    // E8-EF
    "d", "n", "o", "o", "o", "o", "o", nullptr,  // F0-F7
    "o", "u", "u", "u", "u", "y", "th", "y",   // F8-FF
};

// U+0100..U+017F (Latin Extended-A).
constexpr std::array<const char*, 128> kLatinExtAFold = {
    "a", "a", "a", "a", "a", "a",                 // 100-105
    "c", "c", "c", "c", "c", "c", "c", "c",       // 106-10D
    "d", "d", "d", "d",                           // 10E-111
    "e", "e", "e", "e", "e", "e", "e", "e", "e", "e",  // 112-11B
    "g", "g", "g", "g", "g", "g", "g", "g",       // 11C-123
    "h", "h", "h", "h",                           // 124-127
    "i", "i", "i", "i", "i", "i", "i", "i", "i", "i",  // 128-131
    "ij", "ij",                                   // 132-133
    "j", "j",                                     // 134-135
    "k", "k", "k",                                // 136-138
    "l", "l", "l", "l", "l", "l", "l", "l", "l", "l",  // 139-142
    "n", "n", "n", "n", "n", "n", "n", "n", "n",  // 143-14B
    "o", "o", "o", "o", "o", "o",                 // 14C-151
    "oe", "oe",                                   // 152-153
    "r", "r", "r", "r", "r", "r",                 // 154-159
    "s", "s", "s", "s", "s", "s", "s", "s",       // 15A-161
    "t", "t", "t", "t", "t", "t",                 // 162-167
    "u", "u", "u", "u", "u", "u", "u", "u", "u", "u", "u", "u",  // 168-173
    "w", "w",                                     // 174-175
    "y", "y", "y",                                // 176-178
    "z", "z", "z", "z", "z", "z",                 // 179-17E
    "s",                                          // 17F (long s)
};

bool is_combining_mark(char32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

// Appends the folded form of one code point.
void fold_append(char32_t cp, std::u32string& out) {
    if (cp < 0x80) {
        if (cp >= U'A' && cp <= U'Z') cp += 32;
        out.push_back(cp);
        return;
    }
    if (is_combining_mark(cp)) return;
    const char* expansion = nullptr;
    if (cp >= 0xC0 && cp <= 0xFF) {
        expansion = kLatin1Fold[cp - 0xC0];
    } else if (cp >= 0x100 && cp <= 0x17F) {
        expansion = kLatinExtAFold[cp - 0x100];
    }
    if (expansion) {
        for (const char* p = expansion; *p; ++p) out.push_back(static_cast<char32_t>(*p));
    } else {
        out.push_back(cp);
    }
}

}  // namespace

std::u32string utf8_decode(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const auto byte = [&](std::size_t k) { return static_cast<std::uint8_t>(text[k]); };
    while (i < text.size()) {
        std::uint8_t b0 = byte(i);
        if (b0 < 0x80) {
            out.push_back(b0);
            i += 1;
            continue;
        }
        int len;
        char32_t cp;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            i += 1;
            continue;
        }
        if (i + len > text.size()) {
            out.push_back(kReplacement);
            break;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            std::uint8_t bk = byte(i + k);
            if ((bk & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (bk & 0x3F);
        }
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            i += 1;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode(std::u32string_view code_points) {
    std::string out;
    out.reserve(code_points.size());
    for (char32_t cp : code_points) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::u32string fold_code_points(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    for (char32_t cp : utf8_decode(text)) fold_append(cp, out);
    return out;
}

std::string fold_string(std::string_view text) { return utf8_encode(fold_code_points(text)); }

std::string normalize_address(std::string_view text) {
    std::u32string folded = fold_code_points(text);
    std::u32string kept;
    kept.reserve(folded.size());
    bool pending_space = false;
    for (char32_t cp : folded) {
        bool is_space = cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0xA0;
        bool is_alnum = (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || cp >= 0x80;
        if (is_alnum) {
            if (pending_space) kept.push_back(U' ');
            pending_space = false;
            kept.push_back(cp);
        } else if (is_space || !kept.empty()) {
            // Punctuation separates like whitespace, then collapses:
            // "1209,Orange St." == "1209 Orange St".
            pending_space = !kept.empty();
        }
    }
    return utf8_encode(kept);
}

}  // namespace taxgraph
