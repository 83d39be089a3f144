#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace safeindex {

/// Content lexicons, in the canonical order used for feature layout.
inline constexpr std::array<std::string_view, 11> kContentLexicons = {
    "brand-names", "categories-en", "categories-fr", "categories-gen",
    "en-words",    "french-words",  "pornstars",     "queries",
    "small-set",   "tags-en",       "tags-fr",
};

inline constexpr std::string_view kUrlLexicon = "in-url";
inline constexpr std::string_view kDisclaimerLexicon = "disclaimer";

/// Reference cardinalities of the original term lists. The shipped lists are
/// synthetic stand-ins generated to these sizes.
inline constexpr std::array<std::pair<std::string_view, std::size_t>, 12> kReferenceSizes = {{
    {"in-url", 27},        {"brand-names", 34},  {"categories-en", 222},
    {"categories-fr", 593}, {"categories-gen", 79}, {"en-words", 100},
    {"french-words", 163}, {"pornstars", 8825},  {"queries", 716},
    {"small-set", 11},     {"tags-en", 2000},    {"tags-fr", 69},
}};

bool is_known_lexicon_name(std::string_view name);

/// A named set of normalized terms. Multi-word terms are also kept as token
/// sequences so they can be matched against a page's token stream.
class Lexicon {
public:
    /// Normalizes and deduplicates `terms`. Throws LexiconError on a blank
    /// term or when nothing is left.
    Lexicon(std::string name, std::span<const std::string> terms);

    const std::string& name() const { return name_; }
    std::size_t term_count() const { return terms_.size(); }

    /// Sorted, unique, normalized.
    const std::vector<std::string>& terms() const { return terms_; }
    bool contains(std::string_view term) const;

    /// Token sequence of term `i` (same tokenizer as page text). May be empty
    /// for a term made only of punctuation; such a term never matches text.
    const std::vector<std::string>& phrase(std::size_t i) const { return phrases_[i]; }

    /// Indices of terms whose first token is `token`.
    std::span<const std::size_t> starting_with(const std::string& token) const;

    /// One term per line, LF endings. Loading this reproduces an equal Lexicon.
    std::string serialize() const;

    friend bool operator==(const Lexicon& a, const Lexicon& b) {
        return a.name_ == b.name_ && a.terms_ == b.terms_;
    }

private:
    std::string name_;
    std::vector<std::string> terms_;
    std::vector<std::vector<std::string>> phrases_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
};

/// Parses the line-oriented lexicon format: one term per line, '#' comment
/// lines and blank lines skipped, CRLF accepted.
/// Throws LexiconError on invalid UTF-8 or when no term survives.
Lexicon load_lexicon(std::string name, std::string_view source);

Lexicon read_lexicon_file(std::string name, const std::filesystem::path& path);

/// Age-gate phrases used when no disclaimer list is configured.
std::vector<std::string> default_disclaimer_phrases();

/// The named lexicons a filter runs against. Immutable once built.
class LexiconSet {
public:
    LexiconSet() = default;

    /// Throws LexiconError on an unknown or duplicate name. A missing
    /// disclaimer list is filled with default_disclaimer_phrases().
    explicit LexiconSet(std::vector<Lexicon> lexicons);

    /// Nullptr when absent.
    const Lexicon* find(std::string_view name) const;

    /// Throws ConfigError naming the list when absent.
    const Lexicon& at(std::string_view name) const;

    const Lexicon& url_terms() const { return at(kUrlLexicon); }
    const Lexicon& disclaimers() const { return at(kDisclaimerLexicon); }

    /// All 11 content lexicons and the URL list are present.
    bool complete() const;

    /// Names of required lists that are absent.
    std::vector<std::string> missing() const;

    std::size_t size() const { return lexicons_.size(); }

private:
    std::map<std::string, Lexicon, std::less<>> lexicons_;
};

/// Reads a manifest of `name = relative/path` lines ('#' comments) and loads
/// every listed lexicon relative to the manifest's directory.
LexiconSet load_lexicon_manifest(const std::filesystem::path& manifest);

} // namespace safeindex
