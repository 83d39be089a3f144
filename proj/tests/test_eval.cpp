#include "oracles/forest_oracle.hpp"

#include "safeindex/error.hpp"
#include "safeindex/eval.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <random>

using namespace safeindex;

namespace {

std::vector<ScoredPair> run_of(const ConfusionMatrix& cm) {
    std::vector<ScoredPair> run;
    run.insert(run.end(), cm.tp, {Label::adult, Label::adult});
    run.insert(run.end(), cm.fn, {Label::adult, Label::safe});
    run.insert(run.end(), cm.fp, {Label::safe, Label::adult});
    run.insert(run.end(), cm.tn, {Label::safe, Label::safe});
    return run;
}

double percent(std::optional<double> v) { return round_to(*v * 100.0, 2); }

} // namespace

TEST_CASE("score_run") {
    CHECK(score_run({}) == ConfusionMatrix{});
    const std::vector<ScoredPair> each{{Label::adult, Label::adult},
                                       {Label::adult, Label::safe},
                                       {Label::safe, Label::adult},
                                       {Label::safe, Label::safe}};
    CHECK(score_run(each) == ConfusionMatrix{1, 1, 1, 1});
    const ConfusionMatrix table{821, 18, 14, 300};
    CHECK(score_run(run_of(table)) == table);
    CHECK(score_run(run_of(table)).total() == 1153);

    const std::vector<ScoredPair> unlabeled{{Label::adult, Label::adult}, {std::nullopt, Label::safe}};
    CHECK_THROWS_AS(score_run(unlabeled), DataError);
}

TEST_CASE("metrics on the published test-run counts") {
    const auto m = metrics({821, 18, 14, 300});
    CHECK(percent(m.miss_rate) == 2.15);
    CHECK(percent(m.accuracy) == 97.22);
    CHECK(percent(m.recall) == 97.85);
    CHECK(percent(m.precision) == 98.32);
}

TEST_CASE("metrics edge cases") {
    const auto perfect = metrics({40, 0, 0, 25});
    CHECK(perfect.miss_rate == 0.0);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.precision == 1.0);

    const auto half = metrics({1, 1, 1, 1});
    CHECK(half.miss_rate == 0.5);
    CHECK(half.accuracy == 0.5);
    CHECK(half.recall == 0.5);
    CHECK(half.precision == 0.5);

    const auto empty = metrics({});
    CHECK_FALSE(empty.miss_rate);
    CHECK_FALSE(empty.accuracy);
    CHECK_FALSE(empty.recall);
    CHECK_FALSE(empty.precision);

    const auto safe_only = metrics({0, 0, 3, 7});
    CHECK_FALSE(safe_only.recall);
    CHECK_FALSE(safe_only.miss_rate);
    CHECK(safe_only.precision == 0.0);
    CHECK(safe_only.accuracy == 0.7);
}

TEST_CASE("metric properties on random runs") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        const ConfusionMatrix cm{rng() % 50, rng() % 50, rng() % 50, 1 + rng() % 50};
        auto run = run_of(cm);
        std::shuffle(run.begin(), run.end(), rng);
        CHECK(score_run(run) == cm);
        const auto m = metrics(score_run(run));
        const double total = static_cast<double>(cm.total());
        CHECK(*m.accuracy == 1.0 - static_cast<double>(cm.fn + cm.fp) / total);
        CHECK(*m.accuracy == doctest::Approx(static_cast<double>(cm.tp + cm.tn) / total).epsilon(1e-15));
        if (m.recall) CHECK(*m.recall + *m.miss_rate == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("rounding helpers") {
    CHECK(round_to(0.021454, 4) == 0.0215);
    CHECK(round_to(-1.005, 0) == -1.0);
    CHECK(round_to(2.5, 0) == 3.0);
    CHECK(round_significant(0.0214541) == 0.02145);
    CHECK(round_significant(97.2246) == 97.22);
    CHECK(round_significant(1.0) == 1.0);
    CHECK(round_significant(0.0) == 0.0);
    CHECK(round_significant(123456.0) == 123500.0);
}

TEST_CASE("format_confusion") {
    CHECK(format_confusion({821, 18, 14, 300}) ==
          "   (a)    (b)   <- classified as\n"
          "------ ------\n"
          "   821     18   (a): class adult\n"
          "    14    300   (b): class safe\n");
}

TEST_CASE("metrics_json") {
    const auto j = nlohmann::json::parse(metrics_json({821, 18, 14, 300}));
    CHECK(j["tp"] == 821);
    CHECK(j["tn"] == 300);
    CHECK(j["miss_rate"].get<double>() == 0.02145);
    CHECK(j["accuracy"].get<double>() == 0.9722);
    CHECK(j["recall"].get<double>() == 0.9785);
    CHECK(j["precision"].get<double>() == 0.9832);

    const auto none = nlohmann::json::parse(metrics_json({}));
    CHECK(none["accuracy"].is_null());
    CHECK(none["precision"].is_null());
}

TEST_CASE("attribute_usage") {
    const auto root_attr = *attribute_index("ratio_categories-gen");
    const auto deep_attr = *attribute_index("nbr_img");

    Forest f;
    for (int i = 0; i < 3; ++i) {
        Tree t;
        Tree::Node root;
        root.attribute = static_cast<std::uint32_t>(root_attr);
        root.threshold = 0.1;
        t.add(root);
        const auto l = t.add({.label = Label::safe});
        Tree::Node inner;
        inner.attribute = static_cast<std::uint32_t>(deep_attr);
        inner.threshold = 5;
        const auto r = t.add(inner);
        const auto rl = t.add({.label = Label::safe});
        const auto rr = t.add({.label = Label::adult});
        t.node(r).left = rl;
        t.node(r).right = rr;
        t.node(0).left = l;
        t.node(0).right = r;
        f.trees.push_back(std::move(t));
    }

    std::vector<FeatureVector> vectors(4);
    vectors[0][root_attr] = 0.5;

    const auto usage = attribute_usage(f, vectors);
    CHECK(usage[root_attr] == 1.0);
    CHECK(usage[deep_attr] == 0.25);
    CHECK(usage[kInUrl] == 0.0);

    const auto none = attribute_usage(f, {});
    CHECK(std::all_of(none.begin(), none.end(), [](double u) { return u == 0.0; }));

    CHECK(format_attribute_usage(usage) == " 100.0%  ratio_categories-gen\n  25.0%  nbr_img\n");
}

TEST_CASE("attribute_usage matches a per-page per-tree walk") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::unique_ptr<oracle::Node>> refs;
        Forest f;
        const auto n_trees = 1 + rng() % 10;
        for (std::size_t i = 0; i < n_trees; ++i) {
            refs.push_back(oracle::random_tree(rng, 5));
            Tree t;
            oracle::flatten(*refs.back(), t);
            f.trees.push_back(std::move(t));
        }
        std::vector<FeatureVector> vectors;
        const auto n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i) vectors.push_back(oracle::random_vector(rng));

        std::array<std::size_t, kAttributeCount> hits{};
        for (const auto& fv : vectors) {
            std::set<std::size_t> seen;
            for (const auto& r : refs) oracle::descend(*r, fv, seen);
            for (auto a : seen) ++hits[a];
        }
        const auto usage = attribute_usage(f, vectors);
        for (std::size_t a = 0; a < kAttributeCount; ++a) {
            CHECK(usage[a] == static_cast<double>(hits[a]) / static_cast<double>(n));
        }
        for (const auto& r : refs) {
            if (r->attribute) CHECK(usage[*r->attribute] == 1.0);
        }
    }
}
