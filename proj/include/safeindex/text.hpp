#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace safeindex {

/// True when `s` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid_utf8(std::string_view s);

/// Codepoint-level lowercase. Covers ASCII, Latin-1, Latin Extended-A,
/// basic Greek and Cyrillic. No diacritic folding: "É" becomes "é".
/// Invalid sequences are copied through byte by byte.
std::string to_lower(std::string_view s);

/// Lowercase, trim, and collapse internal whitespace runs to one space.
/// Throws LexiconError("blank term") if nothing survives.
std::string normalize_term(std::string_view raw);

/// Split plain text into normalized word tokens.
///
/// A word is a maximal run of alphanumeric codepoints. An apostrophe or a
/// hyphen is kept when it sits between two alphanumerics ("l'amour",
/// "hard-core"); the typographic apostrophe U+2019 is folded to '\''.
/// Codepoints outside ASCII count as alphanumeric unless they fall in a
/// known punctuation/space block.
std::vector<std::string> tokenize(std::string_view text);

} // namespace safeindex
