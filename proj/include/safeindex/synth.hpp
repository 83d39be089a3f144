#pragma once

#include "safeindex/lexicon.hpp"
#include "safeindex/page.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace safeindex::synth {

/// Stand-in term lists at the reference cardinalities (kReferenceSizes).
/// Terms are pronounceable pseudo-words, plus a handful of generic seeds
/// ("sex", "xxx", "porn", "cam4", "tube8", ...). Deterministic in `seed`.
std::vector<Lexicon> generate_lexicons(std::uint64_t seed = 2016);

/// Pseudo-words disjoint from every term token of `lexicons`.
std::vector<std::string> neutral_vocabulary(const LexiconSet& lexicons, std::size_t size, std::uint64_t seed);

/// Writes `<name>.txt` per lexicon plus `manifest.txt` into `dir`.
void write_lexicons(const std::vector<Lexicon>& lexicons, const std::filesystem::path& dir);

struct CorpusSpec {
    std::size_t pages = 226;
    std::size_t adult = 120;
    /// Share of safe-page tokens drawn from the generic adult lists.
    double noise = 0.10;
    /// Adult pages draw lexicon tokens at a rate uniform in this range.
    double adult_rate_min = 0.20;
    double adult_rate_max = 0.60;
    std::size_t min_tokens = 40;
    std::size_t max_tokens = 300;
    /// Adult pages per adult domain, on average.
    std::size_t pages_per_domain = 3;
    std::uint64_t seed = 1;
};

struct SyntheticPage {
    std::string url;
    std::string html;
    Label label = Label::safe;
};

/// Adult and safe pages interleaved at random; deterministic in spec.seed.
std::vector<SyntheticPage> generate_corpus(const LexiconSet& lexicons, const CorpusSpec& spec);

/// Writes `pages/NNNNN.html` and `manifest.csv` (path,url,label) into `dir`.
void write_corpus(const std::vector<SyntheticPage>& pages, const std::filesystem::path& dir);

std::vector<Page> to_pages(const std::vector<SyntheticPage>& pages);

} // namespace safeindex::synth
