#include "safeindex/pipeline.hpp"

#include "safeindex/error.hpp"
#include "safeindex/io.hpp"

#include <json.hpp>

namespace safeindex {

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::blacklist: return "blacklist";
    case Stage::disclaimer: return "disclaimer";
    case Stage::tld_xxx: return "tld_xxx";
    case Stage::forest: return "forest";
    }
    return "unknown";
}

FilterState::FilterState(std::size_t trigger) : trigger_(trigger) {
    if (trigger_ < 1) throw ConfigError("blacklist trigger must be >= 1");
}

bool FilterState::record_unsafe(const std::string& domain, const std::string& url) {
    if (!counted_urls_.insert(url).second) return false;
    const auto count = ++counts_[domain];
    if (count >= trigger_ && !blacklist_.contains(domain)) {
        blacklist_.insert(domain);
        return true;
    }
    return false;
}

std::size_t FilterState::unsafe_count(std::string_view domain) const {
    const auto it = counts_.find(domain);
    return it == counts_.end() ? 0 : it->second;
}

std::set<std::string, std::less<>> parse_blacklist(std::string_view source) {
    std::set<std::string, std::less<>> out;
    std::size_t pos = 0;
    while (pos < source.size()) {
        auto nl = source.find('\n', pos);
        if (nl == std::string_view::npos) nl = source.size();
        auto line = source.substr(pos, nl - pos);
        pos = nl + 1;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string_view::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        out.insert(parse_url(line.substr(b, e - b + 1)).registrable_domain);
    }
    return out;
}

std::string serialize_blacklist(const std::set<std::string, std::less<>>& blacklist) {
    std::string out;
    for (const auto& d : blacklist) out += d + "\n";
    return out;
}

FilterState load_blacklist(const std::filesystem::path& path, std::size_t trigger) {
    FilterState state(trigger);
    for (auto d : parse_blacklist(read_file(path))) state.add_to_blacklist(std::move(d));
    return state;
}

void save_blacklist(const FilterState& state, const std::filesystem::path& path) {
    write_file(path, serialize_blacklist(state.blacklist()));
}

bool has_disclaimer(std::span<const std::string> tokens, const Lexicon& disclaimers) {
    return match_lexicon(tokens, disclaimers).occurrences > 0;
}

Filter::Filter(const Forest& forest, const LexiconSet& lexicons, StageToggles toggles)
    : forest_(&forest), extractor_(lexicons), toggles_(toggles) {
    if (forest.trees.empty()) throw ConfigError("filter: empty forest");
}

Verdict Filter::filter_page(const Page& page, FilterState& state) const {
    const auto& domain = page.url.registrable_domain;
    Verdict v;
    if (toggles_.blacklist && state.blacklisted(domain)) {
        v = {Label::adult, Stage::blacklist, std::nullopt};
    } else if (toggles_.disclaimer && has_disclaimer(page.tokens, extractor_.lexicons().disclaimers())) {
        v = {Label::adult, Stage::disclaimer, std::nullopt};
    } else if (toggles_.tld_xxx && page.url.tld == "xxx") {
        v = {Label::adult, Stage::tld_xxx, std::nullopt};
    } else {
        const auto fv = extractor_(page);
        v = {classify(*forest_, fv), Stage::forest, forest_score(*forest_, fv)};
    }
    if (v.label == Label::adult && toggles_.blacklist_update) state.record_unsafe(domain, page.url.full_url);
    return v;
}

void StageReport::count(const Verdict& v) {
    switch (v.reason) {
    case Stage::blacklist: ++blacklist; break;
    case Stage::disclaimer: ++disclaimer; break;
    case Stage::tld_xxx: ++tld_xxx; break;
    case Stage::forest: ++(v.label == Label::adult ? forest_adult : forest_safe); break;
    }
}

std::string StageReport::to_json() const {
    nlohmann::ordered_json j;
    j["blacklist"] = blacklist;
    j["disclaimer"] = disclaimer;
    j["tld_xxx"] = tld_xxx;
    j["forest_adult"] = forest_adult;
    j["forest_safe"] = forest_safe;
    j["skipped"] = skipped;
    return j.dump(2) + "\n";
}

IndexResult build_safe_index(std::span<const PageRecord> records, const Filter& filter, FilterState& state) {
    IndexResult result;
    for (const auto& rec : records) {
        const auto* page = std::get_if<Page>(&rec);
        if (!page) {
            ++result.report.skipped;
            continue;
        }
        const auto v = filter.filter_page(*page, state);
        result.report.count(v);
        if (v.label == Label::safe) result.index.push_back(page->url.full_url);
        result.verdicts.push_back(v);
    }
    return result;
}

} // namespace safeindex
