#include "safeindex/features.hpp"

#include "safeindex/error.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace safeindex {

namespace {

std::array<std::string, kAttributeCount> make_names() {
    std::array<std::string, kAttributeCount> names;
    names[kInUrl] = "in_url";
    names[kInNdd] = "in_ndd";
    names[kNbrImg] = "nbr_img";
    std::size_t i = 3;
    for (auto lex : kContentLexicons) {
        names[i++] = "nb_" + std::string(lex);
        names[i++] = "ratio_" + std::string(lex);
        names[i++] = "prop_" + std::string(lex);
    }
    return names;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

const std::array<std::string, kAttributeCount>& attribute_names() {
    static const auto names = make_names();
    return names;
}

std::optional<std::size_t> attribute_index(std::string_view name) {
    const auto& names = attribute_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

std::size_t attribute_index(std::string_view lexicon, Metric metric) {
    const auto it = std::find(kContentLexicons.begin(), kContentLexicons.end(), lexicon);
    if (it == kContentLexicons.end()) throw ConfigError("not a content lexicon: " + std::string(lexicon));
    return 3 + 3 * static_cast<std::size_t>(it - kContentLexicons.begin()) + static_cast<std::size_t>(metric);
}

double FeatureVector::at(std::string_view name) const {
    const auto i = attribute_index(name);
    if (!i) throw ConfigError("unknown attribute: " + std::string(name));
    return values_[*i];
}

std::size_t substring_hits(std::string_view haystack, const Lexicon& lexicon) {
    return static_cast<std::size_t>(std::count_if(lexicon.terms().begin(), lexicon.terms().end(),
                                                   [&](const std::string& t) { return haystack.find(t) != std::string_view::npos; }));
}

LexiconMatch match_lexicon(std::span<const std::string> tokens, const Lexicon& lexicon) {
    LexiconMatch m;
    if (tokens.empty()) return m;
    std::vector<bool> covered(tokens.size(), false);
    std::vector<bool> seen(lexicon.term_count(), false);

    for (std::size_t start = 0; start < tokens.size(); ++start) {
        for (const auto term : lexicon.starting_with(tokens[start])) {
            const auto& phrase = lexicon.phrase(term);
            if (phrase.size() > tokens.size() - start) continue;
            if (!std::equal(phrase.begin() + 1, phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start) + 1)) {
                continue;
            }
            ++m.occurrences;
            if (!seen[term]) {
                seen[term] = true;
                ++m.distinct_terms;
            }
            for (std::size_t k = 0; k < phrase.size(); ++k) covered[start + k] = true;
        }
    }
    m.covered_positions = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), true));
    return m;
}

std::size_t nb_metric(std::span<const std::string> tokens, const Lexicon& lexicon) {
    return match_lexicon(tokens, lexicon).occurrences;
}

double ratio_metric(std::span<const std::string> tokens, const Lexicon& lexicon) {
    return static_cast<double>(match_lexicon(tokens, lexicon).distinct_terms) /
           static_cast<double>(lexicon.term_count());
}

double prop_metric(std::span<const std::string> tokens, const Lexicon& lexicon) {
    if (tokens.empty()) return 0.0;
    return static_cast<double>(match_lexicon(tokens, lexicon).covered_positions) /
           static_cast<double>(tokens.size());
}

FeatureVector extract_features(const Page& page, const LexiconSet& lexicons) {
    FeatureVector fv;
    const auto& url_terms = lexicons.url_terms();
    fv[kInUrl] = static_cast<double>(substring_hits(page.url.full_url, url_terms));
    fv[kInNdd] = static_cast<double>(substring_hits(page.url.registrable_domain, url_terms));
    fv[kNbrImg] = static_cast<double>(page.image_count);

    std::size_t i = 3;
    for (auto name : kContentLexicons) {
        const auto& lex = lexicons.at(name);
        const auto m = match_lexicon(page.tokens, lex);
        fv[i++] = static_cast<double>(m.occurrences);
        fv[i++] = static_cast<double>(m.distinct_terms) / static_cast<double>(lex.term_count());
        fv[i++] = page.tokens.empty() ? 0.0
                                      : static_cast<double>(m.covered_positions) / static_cast<double>(page.tokens.size());
    }
    return fv;
}

FeatureExtractor::FeatureExtractor(const LexiconSet& lexicons) : lexicons_(&lexicons) {
    if (const auto absent = lexicons.missing(); !absent.empty()) {
        throw ConfigError("missing lexicon: " + absent.front());
    }
}

FeatureVector FeatureExtractor::operator()(const Page& page) const {
    extractions_.fetch_add(1, std::memory_order_relaxed);
    return extract_features(page, *lexicons_);
}

std::string feature_csv_header() {
    std::string out = "url,label";
    for (const auto& n : attribute_names()) {
        out += ',';
        out += n;
    }
    return out;
}

std::string feature_csv_row(const Page& page, const FeatureVector& fv) {
    std::ostringstream out;
    out << csv_field(page.url.full_url) << ',' << (page.label ? to_string(*page.label) : "unlabeled");
    out << std::setprecision(17);
    for (std::size_t i = 0; i < kAttributeCount; ++i) out << ',' << fv[i];
    return out.str();
}

} // namespace safeindex
