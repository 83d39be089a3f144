#include "safeindex/forest.hpp"

#include "safeindex/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace safeindex {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

ClassWeights weigh(const WeightedRows& rows, std::span<const std::size_t> subset) {
    ClassWeights w;
    for (auto i : subset) w.add(rows.labels[i], rows.weights[i]);
    return w;
}

// Midpoint strictly below `hi` so that `lo` routes left and `hi` right.
double midpoint(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return mid < hi ? mid : lo;
}

bool better(const Split& a, const Split& b) {
    if (std::abs(a.gain_ratio - b.gain_ratio) > kGainEpsilon) return a.gain_ratio > b.gain_ratio;
    if (std::abs(a.gain - b.gain) > kGainEpsilon) return a.gain > b.gain;
    const auto& names = attribute_names();
    if (a.attribute != b.attribute) return names[a.attribute] < names[b.attribute];
    return a.threshold < b.threshold;
}

std::uint32_t grow(Tree& tree, const WeightedRows& rows, std::vector<std::size_t> subset, std::size_t depth,
                   const TrainConfig& config, const AttributeSet& all) {
    const auto w = weigh(rows, subset);
    Tree::Node node;
    node.weights = w;
    node.label = cost_label(w, config.fn_cost);

    const bool pure = w.adult <= 0.0 || w.safe <= 0.0;
    std::optional<Split> split;
    if (!pure && depth < config.max_depth) split = best_split(rows, subset, all, config.min_leaf_weight);
    if (!split) return tree.add(node);

    node.attribute = static_cast<std::uint32_t>(split->attribute);
    node.threshold = split->threshold;
    const auto self = tree.add(node);

    std::vector<std::size_t> left, right;
    for (auto i : subset) {
        (rows.features[i][split->attribute] > split->threshold ? right : left).push_back(i);
    }
    subset.clear();
    subset.shrink_to_fit();

    const auto l = grow(tree, rows, std::move(left), depth + 1, config, all);
    const auto r = grow(tree, rows, std::move(right), depth + 1, config, all);
    tree.node(self).left = l;
    tree.node(self).right = r;
    return self;
}

// 53-bit uniform in [0,1); spelled out so models are identical across
// standard library implementations.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void normalize_to(std::vector<double>& w, double target) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x *= target / sum;
}

} // namespace

double entropy(ClassWeights w) {
    if (w.adult < 0.0 || w.safe < 0.0) throw std::domain_error("entropy: negative weight");
    const double total = w.total();
    if (total <= 0.0) throw std::domain_error("entropy: both weights zero");
    return plogp(w.adult / total) + plogp(w.safe / total);
}

Label cost_label(ClassWeights w, double fn_cost) {
    // Expected cost of calling it safe is adult*fn_cost; of calling it adult, safe*1.
    return w.adult * fn_cost > w.safe ? Label::adult : Label::safe;
}

std::optional<Split> best_split(const WeightedRows& rows, std::span<const std::size_t> subset,
                                const AttributeSet& attributes, double min_leaf_weight) {
    if (subset.empty()) return std::nullopt;
    const auto total = weigh(rows, subset);
    if (total.total() <= 0.0) return std::nullopt;
    const double parent_entropy = entropy(total);
    if (parent_entropy <= 0.0) return std::nullopt;

    // Side weights are running sums; allow for rounding so a side weighing
    // exactly min_leaf_weight qualifies whatever the summation order.
    const double min_side = min_leaf_weight * (1.0 - kWeightTolerance);
    std::vector<Split> candidates;
    std::vector<std::size_t> order(subset.begin(), subset.end());

    for (std::size_t a = 0; a < kAttributeCount; ++a) {
        if (!attributes.test(a)) continue;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return rows.features[x][a] < rows.features[y][a];
        });

        ClassWeights left;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            left.add(rows.labels[order[k]], rows.weights[order[k]]);
            const double lo = rows.features[order[k]][a];
            const double hi = rows.features[order[k + 1]][a];
            if (!(lo < hi)) continue;

            const ClassWeights right{total.adult - left.adult, total.safe - left.safe};
            const double wl = left.total();
            const double wr = total.total() - wl;
            if (wl < min_side || wr < min_side || wl <= 0.0 || wr <= 0.0) continue;

            const double pl = wl / total.total();
            const double pr = wr / total.total();
            const double children = pl * entropy(left) + pr * entropy(ClassWeights{std::max(0.0, right.adult), std::max(0.0, right.safe)});
            const double gain = parent_entropy - children;
            if (gain <= kGainEpsilon) continue;
            const double split_info = plogp(pl) + plogp(pr);
            candidates.push_back(Split{a, midpoint(lo, hi), gain, gain / split_info});
        }
    }
    if (candidates.empty()) return std::nullopt;

    double mean_gain = 0.0;
    for (const auto& c : candidates) mean_gain += c.gain;
    mean_gain /= static_cast<double>(candidates.size());

    std::optional<Split> best;
    for (const auto& c : candidates) {
        if (c.gain < mean_gain - kGainEpsilon) continue;
        if (!best || better(c, *best)) best = c;
    }
    return best;
}

Tree Tree::leaf(Label label, ClassWeights weights) {
    Tree t;
    Node n;
    n.label = label;
    n.weights = weights;
    t.add(n);
    return t;
}

std::uint32_t Tree::add(const Node& node) {
    nodes_.push_back(node);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::size_t Tree::depth() const {
    if (nodes_.empty()) return 0;
    std::size_t deepest = 0;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const auto& n = nodes_[i];
        if (!n.is_leaf()) {
            stack.emplace_back(n.left, d + 1);
            stack.emplace_back(n.right, d + 1);
        }
    }
    return deepest;
}

AttributeSet Tree::attributes_used() const {
    AttributeSet used;
    for (const auto& n : nodes_) {
        if (!n.is_leaf()) used.set(n.attribute);
    }
    return used;
}

TreeDecision tree_classify(const Tree& tree, const FeatureVector& fv) {
    TreeDecision d;
    std::uint32_t i = 0;
    while (true) {
        const auto& n = tree.node(i);
        if (n.is_leaf()) {
            d.label = n.label;
            return d;
        }
        d.visited.set(n.attribute);
        i = fv[n.attribute] > n.threshold ? n.right : n.left;
    }
}

std::size_t adult_votes(const Forest& forest, const FeatureVector& fv) {
    return static_cast<std::size_t>(std::count_if(forest.trees.begin(), forest.trees.end(), [&](const Tree& t) {
        return tree_classify(t, fv).label == Label::adult;
    }));
}

double forest_score(const Forest& forest, const FeatureVector& fv) {
    if (forest.trees.empty()) throw std::logic_error("forest_score: empty forest");
    return static_cast<double>(adult_votes(forest, fv)) / static_cast<double>(forest.trees.size());
}

Label classify(const Forest& forest, const FeatureVector& fv) {
    if (forest.trees.empty()) throw std::logic_error("classify: empty forest");
    if (forest.min_adult_votes) {
        return adult_votes(forest, fv) >= *forest.min_adult_votes ? Label::adult : Label::safe;
    }
    return forest_score(forest, fv) > forest.vote_threshold ? Label::adult : Label::safe;
}

void TrainConfig::validate() const {
    if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
    if (!(fn_cost > 0.0) || !std::isfinite(fn_cost)) throw ConfigError("fn_cost must be positive");
    if (!(min_leaf_weight > 0.0) || !std::isfinite(min_leaf_weight)) {
        throw ConfigError("min_leaf_weight must be positive");
    }
}

Tree grow_tree(const WeightedRows& rows, const TrainConfig& config) {
    if (rows.size() == 0) throw TrainingError("grow_tree: no rows");
    AttributeSet all;
    all.set();
    std::vector<std::size_t> subset(rows.size());
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    Tree tree;
    grow(tree, rows, std::move(subset), 0, config, all);
    return tree;
}

TrainResult train_forest(std::span<const FeatureVector> features, std::span<const Label> labels,
                         const TrainConfig& config) {
    config.validate();
    if (features.size() != labels.size()) throw TrainingError("feature/label count mismatch");
    const auto n_adult = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::adult));
    if (features.size() < 2 || n_adult == 0 || n_adult == labels.size()) {
        throw TrainingError("degenerate class distribution");
    }

    const double n = static_cast<double>(features.size());
    std::vector<double> initial(features.size());
    for (std::size_t i = 0; i < labels.size(); ++i) initial[i] = labels[i] == Label::adult ? config.fn_cost : 1.0;
    normalize_to(initial, n);

    std::mt19937_64 rng(config.rng_seed);
    std::vector<double> weights = initial;

    TrainResult result;
    for (std::size_t t = 0; t < config.n_trees; ++t) {
        const WeightedRows rows{features, labels, weights};
        auto tree = grow_tree(rows, config);

        std::vector<bool> wrong(features.size());
        double wrong_weight = 0.0;
        std::size_t wrong_rows = 0;
        for (std::size_t i = 0; i < features.size(); ++i) {
            wrong[i] = tree_classify(tree, features[i]).label != labels[i];
            if (wrong[i]) {
                wrong_weight += weights[i];
                ++wrong_rows;
            }
        }
        const double eps = wrong_weight / std::accumulate(weights.begin(), weights.end(), 0.0);

        result.report.trees.push_back({tree.size(), static_cast<double>(wrong_rows) / n});
        result.forest.trees.push_back(std::move(tree));

        if (eps >= 0.5 || eps <= 0.0) {
            // Nothing left to learn from (or nothing learned): restart from the
            // cost-scaled weights, jittered so the next tree differs.
            weights = initial;
            for (auto& w : weights) w *= 0.5 + unit_uniform(rng);
        } else {
            const double factor = (1.0 - eps) / eps;
            for (std::size_t i = 0; i < weights.size(); ++i) {
                if (wrong[i]) weights[i] *= factor;
            }
        }
        normalize_to(weights, n);
    }

    std::size_t ensemble_wrong = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (classify(result.forest, features[i]) != labels[i]) ++ensemble_wrong;
    }
    result.report.global_training_error = static_cast<double>(ensemble_wrong) / n;
    return result;
}

} // namespace safeindex
