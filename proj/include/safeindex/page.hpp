#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace safeindex {

enum class Label { adult, safe };

std::string_view to_string(Label label);

/// Parses "adult" / "safe"; nullopt for "unlabeled". Throws DataError otherwise.
std::optional<Label> parse_label(std::string_view s);

struct UrlParts {
    std::string full_url;            // lowercased
    std::string registrable_domain;  // e.g. "youporn.com", "foo.co.uk"
    std::string tld;                 // final label of registrable_domain

    friend bool operator==(const UrlParts&, const UrlParts&) = default;
};

/// Two-level public suffixes for which the registrable domain keeps three labels.
class SuffixTable {
public:
    /// Built-in table (co.uk, com.au, ...).
    SuffixTable();
    explicit SuffixTable(std::set<std::string, std::less<>> suffixes) : suffixes_(std::move(suffixes)) {}

    /// Adds entries from a file, one suffix per line, '#' comments.
    void extend_from(std::string_view source);

    bool contains(std::string_view suffix) const { return suffixes_.contains(suffix); }
    const std::set<std::string, std::less<>>& entries() const { return suffixes_; }

private:
    std::set<std::string, std::less<>> suffixes_;
};

/// Scheme is optional. Throws UrlError when no host can be recognized.
UrlParts parse_url(std::string_view url, const SuffixTable& suffixes = SuffixTable{});

struct ExtractedText {
    std::vector<std::string> tokens;
    std::size_t image_count = 0;
};

/// Tolerant markup stripper: drops comments and script/style bodies, strips
/// tags, decodes common character references, tokenizes the visible text and
/// counts `img` tags. Plain text passes through as-is.
ExtractedText extract_text(std::string_view html);

struct Page {
    UrlParts url;
    std::vector<std::string> tokens;
    std::size_t image_count = 0;
    std::optional<Label> label;
};

Page make_page(std::string_view url, std::string_view html, std::optional<Label> label = std::nullopt,
               const SuffixTable& suffixes = SuffixTable{});

/// One row of a corpus manifest (`path,url,label`).
struct CorpusEntry {
    std::filesystem::path path;  // resolved against the manifest's directory
    std::string url;
    std::optional<Label> label;
};

std::vector<CorpusEntry> parse_corpus_manifest(std::string_view csv, const std::filesystem::path& base_dir);
std::vector<CorpusEntry> read_corpus_manifest(const std::filesystem::path& manifest);

/// A page that could not be loaded; the pipeline records it as skipped.
struct LoadFailure {
    std::string url;
    std::string reason;
};

using PageRecord = std::variant<Page, LoadFailure>;

/// Reads and parses one entry. Never throws for I/O or URL problems; those
/// become LoadFailure.
PageRecord load_page(const CorpusEntry& entry, const SuffixTable& suffixes = SuffixTable{});

std::vector<PageRecord> load_corpus(std::span<const CorpusEntry> entries,
                                    const SuffixTable& suffixes = SuffixTable{});

} // namespace safeindex
