#include "safeindex/error.hpp"
#include "safeindex/io.hpp"
#include "safeindex/page.hpp"
#include "safeindex/text.hpp"

#include <doctest.h>
#include <json.hpp>

#include <random>

using namespace safeindex;
using Tokens = std::vector<std::string>;

TEST_CASE("extract_text: strip tags and count images") {
    const auto r = extract_text("<p>Free PORN here</p><img src=a><img src=b>");
    CHECK(r.tokens == Tokens{"free", "porn", "here"});
    CHECK(r.image_count == 2);

    const auto plain = extract_text("plain text no tags");
    CHECK(plain.tokens == Tokens{"plain", "text", "no", "tags"});
    CHECK(plain.image_count == 0);
}

TEST_CASE("extract_text: script and style bodies are dropped") {
    CHECK(extract_text("<script>var porn=1</script>ok").tokens == Tokens{"ok"});
    CHECK(extract_text("<STYLE>.porn{}</STYLE>ok").tokens == Tokens{"ok"});
    CHECK(extract_text("<script>never closed porn").tokens.empty());
    // A tag name that merely starts with "script" is an ordinary tag.
    CHECK(extract_text("<scripted>visible</scripted>").tokens == Tokens{"visible"});
}

TEST_CASE("extract_text: tolerant of malformed markup") {
    CHECK(extract_text("a < b and c>d").tokens == Tokens{"a", "b", "and", "c", "d"});
    CHECK(extract_text("text <p class=\"unterminated").tokens == Tokens{"text"});
    CHECK(extract_text("<!-- comment porn -->after").tokens == Tokens{"after"});
    CHECK(extract_text("<!-- never closed").tokens.empty());
    CHECK(extract_text("<img src='a>b'>x").image_count == 1);
    CHECK(extract_text("<imgx><image>").image_count == 0);
    CHECK(extract_text("</img>").image_count == 0);
    CHECK(extract_text("&amp;&lt;&#65;&#x42;&bogus;&").tokens == Tokens{"ab", "bogus"});
}

TEST_CASE("extract_text matches the token oracle on the fixture corpus") {
    const auto oracle = nlohmann::json::parse(read_file(std::string(SAFEINDEX_FIXTURES) + "/feature_oracle.json"));
    REQUIRE(oracle["documents"].size() == 20);
    for (const auto& doc : oracle["documents"]) {
        CAPTURE(doc["path"].get<std::string>());
        const auto html = read_file(std::string(SAFEINDEX_FIXTURES) + "/" + doc["path"].get<std::string>());
        const auto r = extract_text(html);
        CHECK(r.tokens == doc["tokens"].get<Tokens>());
        CHECK(r.image_count == doc["image_count"].get<std::size_t>());
        CHECK(extract_text(html).tokens == r.tokens);  // deterministic
        for (const auto& t : r.tokens) CHECK(normalize_term(t) == t);
    }
}

TEST_CASE("parse_url: registrable domain and tld") {
    const auto a = parse_url("https://www.sexhungrymoms.com/x");
    CHECK(a.registrable_domain == "sexhungrymoms.com");
    CHECK(a.tld == "com");
    CHECK(a.full_url == "https://www.sexhungrymoms.com/x");

    CHECK(parse_url("http://video.example.xxx/a").tld == "xxx");
    CHECK(parse_url("foo.co.uk/bar").registrable_domain == "foo.co.uk");
    CHECK(parse_url("a.b.foo.co.uk").registrable_domain == "foo.co.uk");
    CHECK(parse_url("co.uk").registrable_domain == "co.uk");
    CHECK(parse_url("HTTP://User:pw@Shop.Example.COM:8080/Path?Q#F").registrable_domain == "example.com");
    CHECK(parse_url("localhost").registrable_domain == "localhost");
    CHECK(parse_url("//cdn.example.net/x").registrable_domain == "example.net");
    CHECK(parse_url("example.com.").registrable_domain == "example.com");
    CHECK(parse_url("http://10.0.0.1/x").registrable_domain == "10.0.0.1");
}

TEST_CASE("parse_url: every co.uk-style entry of the built-in table keeps three labels") {
    const SuffixTable table;
    for (const auto& suffix : table.entries()) {
        CAPTURE(suffix);
        const auto parts = parse_url("https://www.brand." + suffix + "/p");
        CHECK(parts.registrable_domain == "brand." + suffix);
        CHECK(parts.tld == suffix.substr(suffix.rfind('.') + 1));
    }
}

TEST_CASE("parse_url: suffix table is extensible") {
    SuffixTable table;
    CHECK(parse_url("x.shop.example.test", table).registrable_domain == "example.test");
    table.extend_from("# extra\nexample.test\n");
    CHECK(parse_url("x.shop.example.test", table).registrable_domain == "shop.example.test");
}

TEST_CASE("parse_url: malformed input") {
    CHECK_THROWS_AS(parse_url(""), UrlError);
    CHECK_THROWS_AS(parse_url("   "), UrlError);
    CHECK_THROWS_AS(parse_url("http:///path"), UrlError);
    CHECK_THROWS_AS(parse_url("http://a..b/"), UrlError);
    CHECK_THROWS_AS(parse_url("http://exa mple.com/"), UrlError);
    CHECK_THROWS_AS(parse_url("http://example.com:80x/"), UrlError);
}

TEST_CASE("parse_url properties on random URLs") {
    std::mt19937 rng(11);
    const std::string chars = "abcXYZ019-";
    const char* tlds[] = {"com", "XXX", "fr", "co.uk", "Com.Au", "net"};
    auto word = [&] {
        std::string w(1, 'a' + static_cast<char>(rng() % 26));
        const int len = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < len; ++k) w += chars[rng() % (chars.size() - 1)];
        return w;
    };
    for (int i = 0; i < 500; ++i) {
        std::string host;
        const int labels = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < labels; ++k) host += word() + ".";
        host += tlds[rng() % 6];
        const std::string url = (rng() % 2 ? "HTTPS://" : "") + host + (rng() % 2 ? "/" + word() : "");
        const auto parts = parse_url(url);
        CAPTURE(url);
        CHECK(parse_url(to_lower(url)) == parts);
        CHECK(!parts.tld.empty());
        CHECK(parts.registrable_domain.ends_with(parts.tld));
        CHECK(parts.full_url.find(parts.registrable_domain) != std::string::npos);
    }
}

TEST_CASE("corpus manifest") {
    const auto entries = parse_corpus_manifest(
        "path,url,label\n"
        "a.html,http://a.com/,adult\r\n"
        "\"dir/b,c.html\",\"http://b.com/?x=1,2\",safe\n"
        "c.txt,c.org,unlabeled\n\n",
        "/base");
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].path == "/base/a.html");
    CHECK(entries[0].label == Label::adult);
    CHECK(entries[1].path == "/base/dir/b,c.html");
    CHECK(entries[1].url == "http://b.com/?x=1,2");
    CHECK(entries[1].label == Label::safe);
    CHECK_FALSE(entries[2].label.has_value());

    CHECK_THROWS_AS(parse_corpus_manifest("file,url,label\n", "/"), DataError);
    CHECK_THROWS_AS(parse_corpus_manifest("path,url,label\na,b\n", "/"), DataError);
    CHECK_THROWS_AS(parse_corpus_manifest("path,url,label\na,b,maybe\n", "/"), DataError);
    CHECK_THROWS_AS(parse_corpus_manifest("path,url,label\n\"a,b,c\n", "/"), DataError);
}

TEST_CASE("load_page reports unreadable files and bad URLs as failures") {
    const auto missing = load_page({"/nonexistent/page.html", "http://x.com/", Label::safe});
    REQUIRE(std::holds_alternative<LoadFailure>(missing));
    CHECK(std::get<LoadFailure>(missing).url == "http://x.com/");

    const auto fixture = std::string(SAFEINDEX_FIXTURES) + "/docs/d02.txt";
    const auto bad_url = load_page({fixture, "http:///", Label::safe});
    CHECK(std::holds_alternative<LoadFailure>(bad_url));

    const auto ok = load_page({fixture, "http://example.com/", Label::safe});
    REQUIRE(std::holds_alternative<Page>(ok));
    CHECK(std::get<Page>(ok).tokens == Tokens{"plain", "text", "no", "tags"});
    CHECK(std::get<Page>(ok).label == Label::safe);
}
