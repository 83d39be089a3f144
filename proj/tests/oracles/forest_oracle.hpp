#pragma once

// Naive reference implementations for split search and tree descent. They
// share no code with the library beyond the data types.

#include "safeindex/features.hpp"
#include "safeindex/forest.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using safeindex::FeatureVector;
using safeindex::Label;

struct Row {
    FeatureVector fv;
    Label label;
    double weight;
};

inline double entropy_of(double a, double s) {
    double h = 0.0;
    for (double x : {a, s}) {
        const double p = x / (a + s);
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

struct Candidate {
    std::size_t attribute;
    double threshold;
    double gain;
    double ratio;
};

// Enumerate every (attribute, midpoint), score each by repartitioning the rows
// from scratch, apply the mean-gain guard, and rank.
inline std::optional<Candidate> best_split(const std::vector<Row>& rows, const std::vector<std::size_t>& attrs,
                                           double min_leaf) {
    double ta = 0, ts = 0;
    for (const auto& r : rows) (r.label == Label::adult ? ta : ts) += r.weight;
    if (ta + ts <= 0) return std::nullopt;
    const double h = entropy_of(ta, ts);

    std::vector<Candidate> all;
    for (auto a : attrs) {
        std::set<double> values;
        for (const auto& r : rows) values.insert(r.fv[a]);
        const std::vector<double> v(values.begin(), values.end());
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double t = (v[i] + v[i + 1]) / 2;
            double la = 0, ls = 0, ra = 0, rs = 0;
            for (const auto& r : rows) {
                const bool left = r.fv[a] <= t;
                const bool adult = r.label == Label::adult;
                (left ? (adult ? la : ls) : (adult ? ra : rs)) += r.weight;
            }
            const double wl = la + ls, wr = ra + rs, w = wl + wr;
            // A side at the minimum up to rounding still counts.
            if (wl + 1e-9 * min_leaf < min_leaf || wr + 1e-9 * min_leaf < min_leaf) continue;
            const double gain = h - (wl / w) * entropy_of(la, ls) - (wr / w) * entropy_of(ra, rs);
            if (gain <= 1e-12) continue;
            const double si = -(wl / w) * std::log2(wl / w) - (wr / w) * std::log2(wr / w);
            all.push_back({a, t, gain, gain / si});
        }
    }
    if (all.empty()) return std::nullopt;
    double mean = 0;
    for (const auto& c : all) mean += c.gain;
    mean /= static_cast<double>(all.size());

    const auto& names = safeindex::attribute_names();
    std::optional<Candidate> best;
    for (const auto& c : all) {
        if (c.gain < mean - 1e-12) continue;
        if (!best) {
            best = c;
            continue;
        }
        bool take;
        if (std::abs(c.ratio - best->ratio) > 1e-12) take = c.ratio > best->ratio;
        else if (std::abs(c.gain - best->gain) > 1e-12) take = c.gain > best->gain;
        else if (c.attribute != best->attribute) take = names[c.attribute] < names[best->attribute];
        else take = c.threshold < best->threshold;
        if (take) best = c;
    }
    return best;
}

// Pointer-based tree, interpreted recursively.
struct Node {
    std::optional<std::size_t> attribute;
    double threshold = 0;
    Label label = Label::safe;
    std::unique_ptr<Node> left, right;
};

inline Label descend(const Node& n, const FeatureVector& fv, std::set<std::size_t>& visited) {
    if (!n.attribute) return n.label;
    visited.insert(*n.attribute);
    return descend(fv[*n.attribute] <= n.threshold ? *n.left : *n.right, fv, visited);
}

inline std::unique_ptr<Node> random_tree(std::mt19937_64& rng, int depth) {
    auto n = std::make_unique<Node>();
    if (depth == 0 || rng() % 3 == 0) {
        n->label = rng() % 2 ? Label::adult : Label::safe;
        return n;
    }
    n->attribute = rng() % safeindex::kAttributeCount;
    n->threshold = static_cast<double>(rng() % 9) / 2.0;
    n->left = random_tree(rng, depth - 1);
    n->right = random_tree(rng, depth - 1);
    return n;
}

inline std::uint32_t flatten(const Node& n, safeindex::Tree& out) {
    safeindex::Tree::Node flat;
    flat.label = n.label;
    if (n.attribute) {
        flat.attribute = static_cast<std::uint32_t>(*n.attribute);
        flat.threshold = n.threshold;
    }
    const auto self = out.add(flat);
    if (n.attribute) {
        const auto l = flatten(*n.left, out);
        const auto r = flatten(*n.right, out);
        out.node(self).left = l;
        out.node(self).right = r;
    }
    return self;
}

inline FeatureVector random_vector(std::mt19937_64& rng) {
    FeatureVector fv;
    for (std::size_t i = 0; i < safeindex::kAttributeCount; ++i) fv[i] = static_cast<double>(rng() % 10) / 2.0;
    return fv;
}

} // namespace oracle
