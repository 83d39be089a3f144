#pragma once

#include "safeindex/features.hpp"
#include "safeindex/forest.hpp"
#include "safeindex/lexicon.hpp"
#include "safeindex/page.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace safeindex {

enum class Stage { blacklist, disclaimer, tld_xxx, forest };

std::string_view to_string(Stage stage);

struct Verdict {
    Label label = Label::safe;
    Stage reason = Stage::forest;
    std::optional<double> score;  // present iff reason == forest
};

/// Blacklist plus per-domain unsafe-verdict counters. A domain enters the
/// blacklist once `trigger` adult verdicts on distinct URLs accumulate.
class FilterState {
public:
    explicit FilterState(std::size_t trigger = 3);

    bool blacklisted(std::string_view domain) const { return blacklist_.contains(domain); }
    void add_to_blacklist(std::string domain) { blacklist_.insert(std::move(domain)); }

    /// Records an adult verdict for `url` on `domain`. Repeat URLs are not
    /// counted twice. Returns true if this call blacklisted the domain.
    bool record_unsafe(const std::string& domain, const std::string& url);

    std::size_t unsafe_count(std::string_view domain) const;
    std::size_t trigger() const { return trigger_; }
    const std::set<std::string, std::less<>>& blacklist() const { return blacklist_; }
    const std::map<std::string, std::size_t, std::less<>>& unsafe_counts() const { return counts_; }

    friend bool operator==(const FilterState&, const FilterState&) = default;

private:
    std::size_t trigger_;
    std::set<std::string, std::less<>> blacklist_;
    std::map<std::string, std::size_t, std::less<>> counts_;
    std::set<std::string, std::less<>> counted_urls_;
};

/// Blacklist file: one registrable domain per line, '#' comments.
std::set<std::string, std::less<>> parse_blacklist(std::string_view source);
std::string serialize_blacklist(const std::set<std::string, std::less<>>& blacklist);
FilterState load_blacklist(const std::filesystem::path& path, std::size_t trigger = 3);
void save_blacklist(const FilterState& state, const std::filesystem::path& path);

struct StageToggles {
    bool blacklist = true;
    bool disclaimer = true;
    bool tld_xxx = true;
    bool blacklist_update = true;
};

/// The staged filter: blacklist, disclaimer, .xxx TLD, then the forest.
/// The first stage that fires decides. Adult verdicts feed the blacklist.
class Filter {
public:
    /// Throws ConfigError if the lexicon set is incomplete or the forest empty.
    Filter(const Forest& forest, const LexiconSet& lexicons, StageToggles toggles = {});

    Verdict filter_page(const Page& page, FilterState& state) const;

    /// Feature extractions performed so far (stages 1-3 never extract).
    std::size_t extractions() const { return extractor_.extractions(); }

private:
    const Forest* forest_;
    FeatureExtractor extractor_;
    StageToggles toggles_;
};

/// True if any disclaimer phrase occurs as a contiguous token run.
bool has_disclaimer(std::span<const std::string> tokens, const Lexicon& disclaimers);

struct StageReport {
    std::size_t blacklist = 0;
    std::size_t disclaimer = 0;
    std::size_t tld_xxx = 0;
    std::size_t forest_adult = 0;
    std::size_t forest_safe = 0;
    std::size_t skipped = 0;

    void count(const Verdict& v);
    std::string to_json() const;

    friend bool operator==(const StageReport&, const StageReport&) = default;
};

struct IndexResult {
    std::vector<std::string> index;  // urls of safe pages, input order
    StageReport report;
    std::vector<Verdict> verdicts;   // one per loaded page, input order
};

/// Runs every record through the filter in order, mutating `state`.
IndexResult build_safe_index(std::span<const PageRecord> records, const Filter& filter, FilterState& state);

} // namespace safeindex
