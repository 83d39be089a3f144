#include "safeindex/lexicon.hpp"

#include "safeindex/error.hpp"
#include "safeindex/io.hpp"
#include "safeindex/text.hpp"

#include <algorithm>

namespace safeindex {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename F>
void for_each_line(std::string_view source, F&& f) {
    std::size_t pos = 0;
    while (pos <= source.size()) {
        auto nl = source.find('\n', pos);
        if (nl == std::string_view::npos) nl = source.size();
        auto line = source.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        f(line);
        pos = nl + 1;
    }
}

} // namespace

bool is_known_lexicon_name(std::string_view name) {
    return name == kUrlLexicon || name == kDisclaimerLexicon ||
           std::find(kContentLexicons.begin(), kContentLexicons.end(), name) !=
               kContentLexicons.end();
}

Lexicon::Lexicon(std::string name, std::span<const std::string> terms) : name_(std::move(name)) {
    terms_.reserve(terms.size());
    for (const auto& t : terms) terms_.push_back(normalize_term(t));
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    if (terms_.empty()) throw LexiconError("empty lexicon: " + name_);

    phrases_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        phrases_.push_back(tokenize(terms_[i]));
        if (!phrases_.back().empty()) by_first_token_[phrases_.back().front()].push_back(i);
    }
}

bool Lexicon::contains(std::string_view term) const {
    return std::binary_search(terms_.begin(), terms_.end(), term);
}

std::span<const std::size_t> Lexicon::starting_with(const std::string& token) const {
    const auto it = by_first_token_.find(token);
    if (it == by_first_token_.end()) return {};
    return it->second;
}

std::string Lexicon::serialize() const {
    std::string out;
    for (const auto& t : terms_) {
        out += t;
        out += '\n';
    }
    return out;
}

Lexicon load_lexicon(std::string name, std::string_view source) {
    if (!is_valid_utf8(source)) throw LexiconError("lexicon " + name + ": not valid UTF-8");
    std::vector<std::string> raw;
    for_each_line(source, [&](std::string_view line) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') return;
        raw.emplace_back(t);
    });
    return Lexicon(std::move(name), raw);
}

Lexicon read_lexicon_file(std::string name, const std::filesystem::path& path) {
    return load_lexicon(std::move(name), read_file(path));
}

std::vector<std::string> default_disclaimer_phrases() {
    return {
        "you must be 18",
        "you must be 18 years or older",
        "you must be at least 18",
        "i am 18 or older",
        "i am over 18",
        "adults only",
        "adult content warning",
        "this website contains adult content",
        "this site contains sexually explicit material",
        "contenu pour adultes",
        "réservé aux adultes",
        "vous devez avoir 18 ans",
        "interdit aux moins de 18 ans",
    };
}

LexiconSet::LexiconSet(std::vector<Lexicon> lexicons) {
    for (auto& lex : lexicons) {
        if (!is_known_lexicon_name(lex.name())) throw LexiconError("unknown lexicon name: " + lex.name());
        auto name = lex.name();
        if (!lexicons_.emplace(name, std::move(lex)).second) {
            throw LexiconError("duplicate lexicon: " + name);
        }
    }
    if (!lexicons_.contains(kDisclaimerLexicon)) {
        const auto phrases = default_disclaimer_phrases();
        lexicons_.emplace(std::string(kDisclaimerLexicon), Lexicon(std::string(kDisclaimerLexicon), phrases));
    }
}

const Lexicon* LexiconSet::find(std::string_view name) const {
    const auto it = lexicons_.find(name);
    return it == lexicons_.end() ? nullptr : &it->second;
}

const Lexicon& LexiconSet::at(std::string_view name) const {
    if (const auto* lex = find(name)) return *lex;
    throw ConfigError("missing lexicon: " + std::string(name));
}

std::vector<std::string> LexiconSet::missing() const {
    std::vector<std::string> out;
    if (!find(kUrlLexicon)) out.emplace_back(kUrlLexicon);
    for (auto name : kContentLexicons) {
        if (!find(name)) out.emplace_back(name);
    }
    return out;
}

bool LexiconSet::complete() const { return missing().empty(); }

LexiconSet load_lexicon_manifest(const std::filesystem::path& manifest) {
    const auto source = read_file(manifest);
    const auto base = manifest.parent_path();
    std::vector<Lexicon> lexicons;
    std::size_t line_no = 0;
    for_each_line(source, [&](std::string_view line) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') return;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw LexiconError(manifest.string() + ":" + std::to_string(line_no) +
                               ": expected 'name = path'");
        }
        std::string name(trim(t.substr(0, eq)));
        const std::filesystem::path rel{std::string(trim(t.substr(eq + 1)))};
        lexicons.push_back(read_lexicon_file(std::move(name), base / rel));
    });
    return LexiconSet(std::move(lexicons));
}

} // namespace safeindex
