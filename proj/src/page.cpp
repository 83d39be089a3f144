#include "safeindex/page.hpp"

#include "safeindex/error.hpp"
#include "safeindex/io.hpp"
#include "safeindex/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace safeindex {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool ascii_ieq(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

// Case-insensitive search for an ASCII needle.
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
    if (needle.size() > hay.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        if (ascii_ieq(hay.substr(i, needle.size()), needle)) return i;
    }
    return std::string_view::npos;
}

bool is_host_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '-' || c == '_' || u >= 0x80;
}

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t pos = 0;
    while (true) {
        const auto dot = host.find('.', pos);
        labels.push_back(host.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos));
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return labels;
}

void append_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

constexpr std::array<std::pair<std::string_view, char32_t>, 27> kEntities = {{
    {"amp", '&'},     {"lt", '<'},       {"gt", '>'},       {"quot", '"'},     {"apos", '\''},
    {"nbsp", ' '},    {"rsquo", 0x2019}, {"lsquo", 0x2018}, {"laquo", 0xAB},   {"raquo", 0xBB},
    {"agrave", 0xE0}, {"acirc", 0xE2},   {"ccedil", 0xE7},  {"egrave", 0xE8},  {"eacute", 0xE9},
    {"ecirc", 0xEA},  {"euml", 0xEB},    {"icirc", 0xEE},   {"iuml", 0xEF},    {"ocirc", 0xF4},
    {"ugrave", 0xF9}, {"ucirc", 0xFB},   {"uuml", 0xFC},    {"oelig", 0x153},  {"Eacute", 0xC9},
    {"Agrave", 0xC0}, {"Egrave", 0xC8},
}};

// Decodes a character reference starting at html[i] == '&'. Returns the
// number of bytes consumed, or 0 when it is not a recognized reference.
std::size_t decode_entity(std::string_view html, std::size_t i, std::string& out) {
    const auto semi = html.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) return 0;
    const auto body = html.substr(i + 1, semi - i - 1);
    if (body.size() >= 2 && body[0] == '#') {
        char32_t cp = 0;
        const bool hex = body[1] == 'x' || body[1] == 'X';
        const auto digits = body.substr(hex ? 2 : 1);
        if (digits.empty()) return 0;
        for (char c : digits) {
            const auto u = static_cast<unsigned char>(c);
            int v;
            if (std::isdigit(u)) v = c - '0';
            else if (hex && std::isxdigit(u)) v = std::tolower(u) - 'a' + 10;
            else return 0;
            cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
            if (cp > 0x10FFFF) return 0;
        }
        if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
        append_utf8(cp, out);
        return semi - i + 1;
    }
    for (const auto& [name, cp] : kEntities) {
        if (body == name) {
            append_utf8(cp, out);
            return semi - i + 1;
        }
    }
    return 0;
}

// Finds the '>' closing a tag that opened at `from`, skipping quoted values.
std::size_t tag_end(std::string_view html, std::size_t from) {
    char quote = 0;
    for (std::size_t i = from; i < html.size(); ++i) {
        const char c = html[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '>') {
            return i;
        }
    }
    return std::string_view::npos;
}

} // namespace

std::string_view to_string(Label label) { return label == Label::adult ? "adult" : "safe"; }

std::optional<Label> parse_label(std::string_view s) {
    const auto t = trim(s);
    if (t == "adult") return Label::adult;
    if (t == "safe") return Label::safe;
    if (t == "unlabeled" || t.empty()) return std::nullopt;
    throw DataError("unknown label '" + std::string(t) + "'");
}

SuffixTable::SuffixTable()
    : suffixes_{"ac.uk", "co.uk", "gov.uk", "ltd.uk", "me.uk", "net.uk", "org.uk", "plc.uk",
                "com.au", "net.au", "org.au", "edu.au", "gov.au", "asn.au", "id.au",
                "co.nz", "net.nz", "org.nz", "co.jp", "ne.jp", "or.jp", "ac.jp",
                "co.in", "net.in", "org.in", "co.za", "org.za", "co.kr", "or.kr",
                "com.br", "net.br", "org.br", "com.cn", "net.cn", "org.cn", "com.mx",
                "com.ar", "com.tr", "com.tw", "com.hk", "com.sg", "com.my", "co.il",
                "com.pl", "com.ru", "com.ua", "co.th", "co.id", "com.es", "com.pt"} {}

void SuffixTable::extend_from(std::string_view source) {
    std::size_t pos = 0;
    while (pos < source.size()) {
        auto nl = source.find('\n', pos);
        if (nl == std::string_view::npos) nl = source.size();
        const auto line = trim(source.substr(pos, nl - pos));
        if (!line.empty() && line.front() != '#') suffixes_.insert(to_lower(line));
        pos = nl + 1;
    }
}

UrlParts parse_url(std::string_view url, const SuffixTable& suffixes) {
    const auto full = to_lower(trim(url));
    if (full.empty()) throw UrlError("malformed URL: empty");

    std::string_view rest = full;
    if (const auto sep = rest.find("://"); sep != std::string_view::npos) {
        const auto scheme = rest.substr(0, sep);
        const bool scheme_ok = !scheme.empty() && std::all_of(scheme.begin(), scheme.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
        });
        if (scheme_ok) rest.remove_prefix(sep + 3);
    } else if (rest.starts_with("//")) {
        rest.remove_prefix(2);
    }

    auto host = rest.substr(0, rest.find_first_of("/?#"));
    if (const auto at = host.rfind('@'); at != std::string_view::npos) host.remove_prefix(at + 1);
    if (const auto colon = host.rfind(':'); colon != std::string_view::npos) {
        const auto port = host.substr(colon + 1);
        if (!std::all_of(port.begin(), port.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            throw UrlError("malformed URL: bad port in '" + std::string(url) + "'");
        }
        host = host.substr(0, colon);
    }
    if (!host.empty() && host.back() == '.') host.remove_suffix(1);
    if (host.empty()) throw UrlError("malformed URL: no host in '" + std::string(url) + "'");

    const auto labels = split_labels(host);
    for (auto label : labels) {
        if (label.empty() || !std::all_of(label.begin(), label.end(), is_host_char)) {
            throw UrlError("malformed URL: bad host '" + std::string(host) + "'");
        }
    }

    std::size_t keep = std::min<std::size_t>(2, labels.size());
    const bool ipv4 = labels.size() == 4 && std::all_of(labels.begin(), labels.end(), [](std::string_view l) {
        return std::all_of(l.begin(), l.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    });
    if (ipv4) {
        keep = 4;
    } else if (labels.size() >= 3) {
        const auto n = labels.size();
        std::string two{labels[n - 2]};
        two += '.';
        two += labels[n - 1];
        if (suffixes.contains(two)) keep = 3;
    }

    std::size_t start = host.size();
    for (std::size_t k = 0; k < keep; ++k) {
        start -= labels[labels.size() - 1 - k].size();
        if (k + 1 < keep) --start;
    }

    UrlParts parts;
    parts.full_url = full;
    parts.registrable_domain = std::string(host.substr(start));
    parts.tld = std::string(labels.back());
    return parts;
}

ExtractedText extract_text(std::string_view html) {
    ExtractedText result;
    std::string visible;
    visible.reserve(html.size());

    std::size_t i = 0;
    while (i < html.size()) {
        const char c = html[i];
        if (c == '&') {
            if (const auto n = decode_entity(html, i, visible)) {
                i += n;
                continue;
            }
            visible.push_back(c);
            ++i;
            continue;
        }
        if (c != '<') {
            visible.push_back(c);
            ++i;
            continue;
        }

        if (html.substr(i, 4) == "<!--") {
            const auto end = html.find("-->", i + 4);
            i = end == std::string_view::npos ? html.size() : end + 3;
            visible.push_back(' ');
            continue;
        }

        const auto next = i + 1 < html.size() ? static_cast<unsigned char>(html[i + 1]) : 0;
        if (!(std::isalpha(next) || next == '/' || next == '!' || next == '?')) {
            visible.push_back(c);  // a bare '<' in text
            ++i;
            continue;
        }

        const auto close = tag_end(html, i + 1);
        if (close == std::string_view::npos) break;  // unterminated tag swallows the rest

        const bool closing = next == '/';
        std::size_t n = i + 1 + (closing ? 1 : 0);
        const auto name_begin = n;
        while (n < close && std::isalnum(static_cast<unsigned char>(html[n]))) ++n;
        const auto name = html.substr(name_begin, n - name_begin);
        i = close + 1;
        visible.push_back(' ');

        if (closing) continue;
        if (ascii_ieq(name, "img")) {
            ++result.image_count;
        } else if (ascii_ieq(name, "script") || ascii_ieq(name, "style")) {
            std::string end_tag = "</";
            end_tag += name;
            const auto end = ifind(html, end_tag, i);
            if (end == std::string_view::npos) {
                i = html.size();
            } else {
                const auto gt = html.find('>', end);
                i = gt == std::string_view::npos ? html.size() : gt + 1;
            }
        }
    }

    result.tokens = tokenize(visible);
    return result;
}

Page make_page(std::string_view url, std::string_view html, std::optional<Label> label,
               const SuffixTable& suffixes) {
    auto text = extract_text(html);
    return Page{parse_url(url, suffixes), std::move(text.tokens), text.image_count, label};
}

namespace {

// Splits one CSV record starting at `pos`; supports quoted fields with "" escapes.
std::vector<std::string> next_csv_record(std::string_view csv, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    while (pos < csv.size()) {
        const char c = csv[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < csv.size() && csv[pos + 1] == '"') {
                    field.push_back('"');
                    pos += 2;
                    continue;
                }
                quoted = false;
            } else {
                field.push_back(c);
            }
            ++pos;
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            ++pos;
            break;
        } else if (c != '\r') {
            field.push_back(c);
        }
        ++pos;
    }
    if (quoted) throw DataError("corpus manifest: unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

} // namespace

std::vector<CorpusEntry> parse_corpus_manifest(std::string_view csv, const std::filesystem::path& base_dir) {
    std::size_t pos = 0;
    if (csv.starts_with("\xEF\xBB\xBF")) pos = 3;
    const auto header = next_csv_record(csv, pos);
    if (header.size() != 3 || trim(header[0]) != "path" || trim(header[1]) != "url" || trim(header[2]) != "label") {
        throw DataError("corpus manifest: header must be 'path,url,label'");
    }
    std::vector<CorpusEntry> entries;
    std::size_t line = 1;
    while (pos < csv.size()) {
        ++line;
        const auto rec = next_csv_record(csv, pos);
        if (rec.size() == 1 && trim(rec[0]).empty()) continue;
        if (rec.size() != 3) {
            throw DataError("corpus manifest line " + std::to_string(line) + ": expected 3 fields");
        }
        CorpusEntry e;
        e.path = base_dir / std::filesystem::path(std::string(trim(rec[0])));
        e.url = std::string(trim(rec[1]));
        e.label = parse_label(rec[2]);
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<CorpusEntry> read_corpus_manifest(const std::filesystem::path& manifest) {
    return parse_corpus_manifest(read_file(manifest), manifest.parent_path());
}

PageRecord load_page(const CorpusEntry& entry, const SuffixTable& suffixes) {
    try {
        const auto body = read_file(entry.path);
        return make_page(entry.url, body, entry.label, suffixes);
    } catch (const DataError& e) {
        return LoadFailure{entry.url, e.what()};
    } catch (const UrlError& e) {
        return LoadFailure{entry.url, e.what()};
    }
}

std::vector<PageRecord> load_corpus(std::span<const CorpusEntry> entries, const SuffixTable& suffixes) {
    std::vector<PageRecord> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(load_page(e, suffixes));
    return out;
}

} // namespace safeindex
