#pragma once

#include "safeindex/lexicon.hpp"
#include "safeindex/page.hpp"

#include <array>
#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace safeindex {

inline constexpr std::size_t kAttributeCount = 36;

enum class Metric { nb, ratio, prop };

/// Canonical attribute order: in_url, in_ndd, nbr_img, then nb_X, ratio_X,
/// prop_X for each content lexicon X in kContentLexicons order.
const std::array<std::string, kAttributeCount>& attribute_names();

std::optional<std::size_t> attribute_index(std::string_view name);
std::size_t attribute_index(std::string_view lexicon, Metric metric);

inline constexpr std::size_t kInUrl = 0;
inline constexpr std::size_t kInNdd = 1;
inline constexpr std::size_t kNbrImg = 2;

/// The 36 numeric attributes of one page. Counts are stored as exact
/// integers in double form so every attribute shares one split type.
class FeatureVector {
public:
    FeatureVector() { values_.fill(0.0); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// Throws ConfigError for an unknown attribute name.
    double at(std::string_view name) const;

    static constexpr std::size_t size() { return kAttributeCount; }
    std::span<const double, kAttributeCount> values() const { return values_; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::array<double, kAttributeCount> values_;
};

/// Number of distinct lexicon terms occurring as a raw substring of `haystack`.
std::size_t substring_hits(std::string_view haystack, const Lexicon& lexicon);

/// Match statistics of one lexicon over a token stream. Multi-word terms
/// match contiguous token runs; every (term, start) pair is one occurrence.
struct LexiconMatch {
    std::size_t occurrences = 0;
    std::size_t distinct_terms = 0;
    std::size_t covered_positions = 0;
};

LexiconMatch match_lexicon(std::span<const std::string> tokens, const Lexicon& lexicon);

std::size_t nb_metric(std::span<const std::string> tokens, const Lexicon& lexicon);
double ratio_metric(std::span<const std::string> tokens, const Lexicon& lexicon);
double prop_metric(std::span<const std::string> tokens, const Lexicon& lexicon);

/// Throws ConfigError naming the first absent list.
FeatureVector extract_features(const Page& page, const LexiconSet& lexicons);

/// extract_features bound to a lexicon set, counting how many pages it has
/// processed. The pipeline uses the count to prove short-circuiting.
class FeatureExtractor {
public:
    /// Throws ConfigError if the set is incomplete.
    explicit FeatureExtractor(const LexiconSet& lexicons);

    FeatureVector operator()(const Page& page) const;

    std::size_t extractions() const { return extractions_.load(std::memory_order_relaxed); }
    const LexiconSet& lexicons() const { return *lexicons_; }

private:
    const LexiconSet* lexicons_;
    mutable std::atomic<std::size_t> extractions_{0};
};

/// CSV dump: header `url,label,<36 attributes>`; one row per page.
std::string feature_csv_header();
std::string feature_csv_row(const Page& page, const FeatureVector& fv);

} // namespace safeindex
