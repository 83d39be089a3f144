#include "safeindex/synth.hpp"

#include "safeindex/io.hpp"
#include "safeindex/text.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace safeindex::synth {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }
    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[index(v.size())]; }

private:
    std::mt19937_64 engine_;
};

constexpr std::array<std::string_view, 18> kOnsets = {"b", "d", "g", "k", "l", "m", "n", "p", "r",
                                                      "s", "t", "v", "z", "ch", "st", "tr", "f", "j"};
constexpr std::array<std::string_view, 8> kVowels = {"a", "e", "i", "o", "u", "ia", "ou", "ei"};
constexpr std::array<std::string_view, 6> kCodas = {"", "", "", "n", "x", "r"};

std::string pseudo_word(Rng& rng, std::size_t min_syl, std::size_t max_syl) {
    std::string w;
    const auto n = rng.between(min_syl, max_syl);
    for (std::size_t s = 0; s < n; ++s) {
        w += kOnsets[rng.index(kOnsets.size())];
        w += kVowels[rng.index(kVowels.size())];
    }
    w += kCodas[rng.index(kCodas.size())];
    return w;
}

std::string frenchify(Rng& rng, std::string w) {
    if (rng.chance(0.3)) {
        const auto pos = w.find('e');
        if (pos != std::string::npos) w.replace(pos, 1, rng.chance(0.5) ? "é" : "è");
    }
    if (rng.chance(0.15)) w = "l'" + w;
    return w;
}

struct ListPlan {
    std::string_view name;
    std::vector<std::string> seeds;
    std::size_t min_words = 1;
    std::size_t max_words = 1;
    bool french = false;
};

// Single-word term tokens already handed out; keeps lists disjoint.
class TermPool {
public:
    std::string fresh(Rng& rng, bool french) {
        while (true) {
            auto w = pseudo_word(rng, 2, 3);
            if (french) w = frenchify(rng, std::move(w));
            if (used_.insert(w).second) return w;
        }
    }
    void reserve(const std::string& term) {
        for (auto& t : tokenize(term)) used_.insert(t);
    }

private:
    std::unordered_set<std::string> used_;
};

std::size_t reference_size(std::string_view name) {
    for (const auto& [n, size] : kReferenceSizes) {
        if (n == name) return size;
    }
    return 0;
}

std::vector<std::string> tokens_of(const Lexicon& lex, std::size_t term) { return lex.phrase(term); }

} // namespace

std::vector<Lexicon> generate_lexicons(std::uint64_t seed) {
    Rng rng(seed);
    TermPool pool;
    const std::vector<ListPlan> plans = {
        {"in-url", {"porn", "sex", "xxx", "cam4", "tube8", "adult", "nude", "milf", "escort"}, 1, 1, false},
        {"small-set", {"sex", "xxx", "porn", "nude", "adult"}, 1, 1, false},
        {"brand-names", {"cam4", "tube8"}, 1, 1, false},
        {"categories-en", {}, 1, 2, false},
        {"categories-fr", {}, 1, 2, true},
        {"categories-gen", {}, 1, 1, true},
        {"en-words", {}, 1, 1, false},
        {"french-words", {}, 1, 1, true},
        {"pornstars", {}, 2, 2, false},
        {"queries", {"porn gratis", "porn gallery"}, 2, 3, false},
        {"tags-en", {}, 1, 2, false},
        {"tags-fr", {}, 1, 1, true},
    };

    for (const auto& plan : plans) {
        for (const auto& s : plan.seeds) pool.reserve(s);
    }

    std::vector<Lexicon> out;
    std::vector<std::string> small_set_terms;
    for (const auto& plan : plans) {
        const auto target = reference_size(plan.name);
        std::set<std::string> terms(plan.seeds.begin(), plan.seeds.end());
        while (terms.size() < target) {
            const auto words = rng.between(plan.min_words, plan.max_words);
            std::string term;
            for (std::size_t k = 0; k < words; ++k) {
                if (!term.empty()) term += ' ';
                // Queries reuse the generic vocabulary, like real search strings.
                if (plan.name == "queries" && k == 0 && !small_set_terms.empty() && rng.chance(0.5)) {
                    term += rng.pick(small_set_terms);
                } else {
                    term += pool.fresh(rng, plan.french);
                }
            }
            terms.insert(term);
        }
        std::vector<std::string> list(terms.begin(), terms.end());
        if (plan.name == "small-set") small_set_terms = list;
        out.emplace_back(std::string(plan.name), list);
    }
    out.emplace_back(std::string(kDisclaimerLexicon), default_disclaimer_phrases());
    return out;
}

std::vector<std::string> neutral_vocabulary(const LexiconSet& lexicons, std::size_t size, std::uint64_t seed) {
    std::unordered_set<std::string> taken;
    for (auto name : kContentLexicons) {
        const auto& lex = lexicons.at(name);
        for (std::size_t i = 0; i < lex.term_count(); ++i) {
            for (const auto& t : lex.phrase(i)) taken.insert(t);
        }
    }
    const auto& disc = lexicons.disclaimers();
    for (std::size_t i = 0; i < disc.term_count(); ++i) {
        for (const auto& t : disc.phrase(i)) taken.insert(t);
    }

    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::set<std::string> words;
    while (words.size() < size) {
        auto w = pseudo_word(rng, 1, 3);
        if (!taken.contains(w)) words.insert(std::move(w));
    }
    return {words.begin(), words.end()};
}

void write_lexicons(const std::vector<Lexicon>& lexicons, const std::filesystem::path& dir) {
    std::string manifest = "# lexicon name = file (relative to this manifest)\n";
    for (const auto& lex : lexicons) {
        write_file(dir / (lex.name() + ".txt"), "# synthetic stand-in list: " + lex.name() + "\n" + lex.serialize());
        manifest += lex.name() + " = " + lex.name() + ".txt\n";
    }
    write_file(dir / "manifest.txt", manifest);
}

namespace {

struct LexiconMix {
    std::string_view name;
    double weight;
};

// Lexicon vocabulary mix, for adult pages and for the noise in safe pages.
constexpr std::array<LexiconMix, 11> kAdultMix = {{
    {"tags-en", 0.20}, {"categories-en", 0.14}, {"small-set", 0.12}, {"queries", 0.08},
    {"pornstars", 0.10}, {"brand-names", 0.05}, {"categories-fr", 0.07}, {"categories-gen", 0.06},
    {"en-words", 0.04}, {"french-words", 0.08}, {"tags-fr", 0.06},
}};

template <std::size_t N>
const Lexicon& pick_lexicon(Rng& rng, const LexiconSet& lexicons, const std::array<LexiconMix, N>& mix) {
    double total = 0.0;
    for (const auto& m : mix) total += m.weight;
    double x = rng.unit() * total;
    for (const auto& m : mix) {
        if (x < m.weight) return lexicons.at(m.name);
        x -= m.weight;
    }
    return lexicons.at(mix.back().name);
}

std::string render_html(const std::vector<std::string>& tokens, std::size_t images, Rng& rng,
                        const std::vector<std::string>& vocab) {
    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html><head><title>";
    const auto title_len = std::min<std::size_t>(tokens.size(), 4);
    for (std::size_t i = 0; i < title_len; ++i) html << (i ? " " : "") << tokens[i];
    html << "</title>\n<script>var " << rng.pick(vocab) << " = \"" << rng.pick(vocab) << "\";</script>\n";
    html << "<style>p { margin: 0 }</style></head>\n<body>\n";

    std::size_t next_img = 0;
    std::size_t i = title_len;
    while (i < tokens.size() || next_img < images) {
        html << "<p>";
        const auto len = rng.between(8, 30);
        for (std::size_t k = 0; k < len && i < tokens.size(); ++k, ++i) html << (k ? " " : "") << tokens[i];
        html << "</p>\n";
        const auto imgs_here = std::min<std::size_t>(images - next_img, rng.between(0, 4));
        for (std::size_t k = 0; k < imgs_here; ++k, ++next_img) {
            html << "<img src=\"/img/" << next_img << ".jpg\" alt=\"\">";
        }
        if (imgs_here) html << "\n";
    }
    html << "</body></html>\n";
    return html.str();
}

} // namespace

std::vector<SyntheticPage> generate_corpus(const LexiconSet& lexicons, const CorpusSpec& spec) {
    Rng rng(spec.seed);
    const auto vocab = neutral_vocabulary(lexicons, 3000, 7);
    const auto& url_terms = lexicons.url_terms().terms();

    std::vector<Label> labels(spec.pages, Label::safe);
    std::fill_n(labels.begin(), std::min(spec.adult, spec.pages), Label::adult);
    for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.index(i)]);

    const auto n_domains = std::max<std::size_t>(1, spec.adult / std::max<std::size_t>(1, spec.pages_per_domain));
    std::vector<std::string> adult_domains;
    for (std::size_t d = 0; d < n_domains; ++d) {
        std::string host = rng.chance(0.6) ? rng.pick(url_terms) + rng.pick(vocab) : rng.pick(vocab) + rng.pick(vocab);
        host.erase(std::remove(host.begin(), host.end(), ' '), host.end());
        adult_domains.push_back(host + (rng.chance(0.7) ? ".com" : ".net") );
    }

    std::vector<SyntheticPage> pages;
    pages.reserve(spec.pages);
    for (std::size_t p = 0; p < spec.pages; ++p) {
        const bool adult = labels[p] == Label::adult;
        const auto length = rng.between(spec.min_tokens, spec.max_tokens);
        const double rate = adult ? spec.adult_rate_min + rng.unit() * (spec.adult_rate_max - spec.adult_rate_min)
                                  : spec.noise;

        std::vector<std::string> tokens;
        tokens.reserve(length + 4);
        while (tokens.size() < length) {
            if (rng.chance(rate)) {
                const auto& lex = pick_lexicon(rng, lexicons, kAdultMix);
                for (const auto& t : tokens_of(lex, rng.index(lex.term_count()))) tokens.push_back(t);
            } else {
                tokens.push_back(rng.pick(vocab));
            }
        }

        const auto images = adult ? rng.between(4, 60) : rng.between(0, 20);

        SyntheticPage page;
        page.label = labels[p];
        std::ostringstream url;
        url << "https://";
        if (adult) {
            url << (rng.chance(0.3) ? "www." : "") << rng.pick(adult_domains) << '/';
            if (rng.chance(0.5)) {
                const auto& tags = lexicons.at("tags-en");
                auto tag = tags.terms()[rng.index(tags.term_count())];
                std::replace(tag.begin(), tag.end(), ' ', '-');
                url << "tag/" << tag << '/';
            }
            url << rng.pick(vocab) << '-' << p;
        } else {
            url << (rng.chance(0.5) ? "www." : "") << rng.pick(vocab) << rng.pick(vocab) << (rng.chance(0.8) ? ".com" : ".org")
                << '/' << rng.pick(vocab) << '/' << rng.pick(vocab) << '-' << p;
        }
        page.url = url.str();
        page.html = render_html(tokens, images, rng, vocab);
        pages.push_back(std::move(page));
    }
    return pages;
}

void write_corpus(const std::vector<SyntheticPage>& pages, const std::filesystem::path& dir) {
    std::ostringstream manifest;
    manifest << "path,url,label\n";
    for (std::size_t i = 0; i < pages.size(); ++i) {
        std::ostringstream name;
        name << "pages/" << std::setw(5) << std::setfill('0') << i << ".html";
        write_file(dir / name.str(), pages[i].html);
        manifest << name.str() << ',' << pages[i].url << ',' << to_string(pages[i].label) << '\n';
    }
    write_file(dir / "manifest.csv", manifest.str());
}

std::vector<Page> to_pages(const std::vector<SyntheticPage>& pages) {
    std::vector<Page> out;
    out.reserve(pages.size());
    for (const auto& p : pages) out.push_back(make_page(p.url, p.html, p.label));
    return out;
}

} // namespace safeindex::synth
