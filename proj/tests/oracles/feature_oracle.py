#!/usr/bin/env python3
"""Reference token/feature computation for the fixture corpus.

Deliberately naive and written without looking at the C++ code paths:
html.parser for markup, a regex tokenizer, and brute-force scans over every
(term, start) pair. Output is frozen into fixtures/feature_oracle.json, which
test_features compares against.

usage: feature_oracle.py FIXTURE_DIR > feature_oracle.json
"""

import csv
import json
import re
import sys
from html.parser import HTMLParser
from pathlib import Path

CONTENT = ["brand-names", "categories-en", "categories-fr", "categories-gen",
           "en-words", "french-words", "pornstars", "queries", "small-set",
           "tags-en", "tags-fr"]
TWO_LEVEL = {"co.uk", "com.au", "org.uk", "co.jp", "co.nz"}

WORD = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")


class Visible(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.chunks = []
        self.images = 0
        self.skip = 0

    def handle_starttag(self, tag, attrs):
        if tag == "img":
            self.images += 1
        if tag in ("script", "style"):
            self.skip += 1

    def handle_startendtag(self, tag, attrs):
        if tag == "img":
            self.images += 1

    def handle_endtag(self, tag):
        if tag in ("script", "style") and self.skip:
            self.skip -= 1

    def handle_data(self, data):
        if not self.skip:
            self.chunks.append(data)


def tokens_of(text):
    return [t.replace("’", "'").lower() for t in WORD.findall(text)]


def page_tokens(html):
    p = Visible()
    p.feed(html)
    p.close()
    return tokens_of(" ".join(p.chunks)), p.images


def load_list(path):
    terms = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        terms.add(" ".join(line.split()).lower())
    return sorted(terms)


def url_parts(url):
    u = url.strip().lower()
    rest = u.split("://", 1)[1] if "://" in u else u
    host = re.split(r"[/?#]", rest, maxsplit=1)[0]
    host = host.rsplit("@", 1)[-1].split(":")[0]
    labels = host.split(".")
    keep = 3 if len(labels) >= 3 and ".".join(labels[-2:]) in TWO_LEVEL else 2
    return u, ".".join(labels[-keep:])


def occurrences(tokens, phrase):
    n = len(phrase)
    return [s for s in range(len(tokens) - n + 1) if n and tokens[s:s + n] == phrase]


def features(tokens, images, full_url, domain, lists):
    out = {
        "in_url": sum(1 for t in lists["in-url"] if t in full_url),
        "in_ndd": sum(1 for t in lists["in-url"] if t in domain),
        "nbr_img": images,
    }
    for name in CONTENT:
        terms = lists[name]
        nb = 0
        present = 0
        covered = [False] * len(tokens)
        for term in terms:
            phrase = tokens_of(term)
            starts = occurrences(tokens, phrase)
            nb += len(starts)
            present += 1 if starts else 0
            for s in starts:
                for k in range(len(phrase)):
                    covered[s + k] = True
        out["nb_" + name] = nb
        out["ratio_" + name] = present / len(terms)
        out["prop_" + name] = (sum(covered) / len(tokens)) if tokens else 0.0
    return out


def main():
    root = Path(sys.argv[1])
    lists = {name: load_list(root / "lexicons" / f"{name}.txt") for name in CONTENT + ["in-url"]}
    docs = []
    with open(root / "corpus.csv", newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            html = (root / row["path"]).read_text(encoding="utf-8")
            tokens, images = page_tokens(html)
            full_url, domain = url_parts(row["url"])
            docs.append({
                "path": row["path"],
                "url": row["url"],
                "registrable_domain": domain,
                "tokens": tokens,
                "image_count": images,
                "features": features(tokens, images, full_url, domain, lists),
            })
    json.dump({"documents": docs}, sys.stdout, indent=1, ensure_ascii=False)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
