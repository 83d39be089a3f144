#include "safeindex/text.hpp"

#include "safeindex/error.hpp"

#include <cstdint>
#include <optional>

namespace safeindex {
namespace {

struct Decoded {
    char32_t cp;
    std::size_t len;
};

// Decodes one codepoint at s[i]; nullopt on a malformed sequence.
std::optional<Decoded> decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return Decoded{b0, 1};

    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
        return std::nullopt;
    }
    if (i + len > s.size()) return std::nullopt;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
    return Decoded{cp, len};
}

void encode(char32_t cp, std::string& out) {
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

char32_t lower_cp(char32_t c) {
    if (c >= 'A' && c <= 'Z') return c + 32;
    if (c < 0xC0) return c;
    if (c <= 0xDE) return c == 0xD7 ? c : c + 32;
    if (c >= 0x100 && c <= 0x17F) {
        if (c == 0x130) return 'i';
        if (c == 0x178) return 0xFF;
        if ((c <= 0x137 || (c >= 0x14A && c <= 0x177)) && c % 2 == 0) return c + 1;
        if (((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) && c % 2 == 1) return c + 1;
        return c;
    }
    if (c == 0x386) return 0x3AC;
    if (c >= 0x388 && c <= 0x38A) return c + 37;
    if (c == 0x38C) return 0x3CC;
    if (c == 0x38E || c == 0x38F) return c + 63;
    if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
    if (c >= 0x400 && c <= 0x40F) return c + 80;
    if (c >= 0x410 && c <= 0x42F) return c + 32;
    return c;
}

bool is_alnum_cp(char32_t c) {
    if (c < 0x80) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    }
    if (c <= 0xBF) {
        switch (c) {
        case 0xAA: case 0xB2: case 0xB3: case 0xB5: case 0xB9:
        case 0xBA: case 0xBC: case 0xBD: case 0xBE:
            return true;
        default:
            return false;
        }
    }
    if (c == 0xD7 || c == 0xF7) return false;
    if (c >= 0x2000 && c <= 0x206F) return false;  // general punctuation, spaces
    if (c >= 0x20A0 && c <= 0x20CF) return false;  // currency
    if (c >= 0x2190 && c <= 0x2BFF) return false;  // arrows, math, boxes, symbols
    if (c >= 0x3000 && c <= 0x303F) return false;  // CJK punctuation
    if (c >= 0xFE30 && c <= 0xFE4F) return false;
    if (c >= 0xFF00 && c <= 0xFF0F) return false;
    if (c == 0xFEFF) return false;
    if (c >= 0x1F000 && c <= 0x1FAFF) return false;  // emoji and pictographs
    return true;
}

bool is_space_ascii(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace

bool is_valid_utf8(std::string_view s) {
    for (std::size_t i = 0; i < s.size();) {
        const auto d = decode(s, i);
        if (!d) return false;
        i += d->len;
    }
    return true;
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (const auto d = decode(s, i)) {
            encode(lower_cp(d->cp), out);
            i += d->len;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

std::string normalize_term(std::string_view raw) {
    std::string collapsed;
    collapsed.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space_ascii(c)) {
            pending_space = !collapsed.empty();
            continue;
        }
        if (pending_space) collapsed.push_back(' ');
        pending_space = false;
        collapsed.push_back(c);
    }
    if (collapsed.empty()) throw LexiconError("blank term");
    return to_lower(collapsed);
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    // A joiner seen after an alphanumeric; committed only if another
    // alphanumeric follows.
    char pending_joiner = 0;

    auto flush = [&] {
        if (!current.empty()) tokens.push_back(to_lower(current));
        current.clear();
        pending_joiner = 0;
    };

    for (std::size_t i = 0; i < text.size();) {
        const auto d = decode(text, i);
        if (!d) {
            flush();
            ++i;
            continue;
        }
        i += d->len;
        char32_t c = d->cp;
        if (c == 0x2019) c = '\'';

        if (is_alnum_cp(c)) {
            if (pending_joiner != 0) {
                current.push_back(pending_joiner);
                pending_joiner = 0;
            }
            encode(c, current);
        } else if ((c == '\'' || c == '-') && !current.empty() && pending_joiner == 0) {
            pending_joiner = static_cast<char>(c);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

} // namespace safeindex
