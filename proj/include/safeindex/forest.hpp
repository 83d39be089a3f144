#pragma once

#include "safeindex/features.hpp"
#include "safeindex/page.hpp"

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace safeindex {

struct ClassWeights {
    double adult = 0.0;
    double safe = 0.0;

    double total() const { return adult + safe; }
    double of(Label l) const { return l == Label::adult ? adult : safe; }
    void add(Label l, double w) { (l == Label::adult ? adult : safe) += w; }

    friend bool operator==(const ClassWeights&, const ClassWeights&) = default;
};

/// Shannon entropy in bits of the normalized pair. Throws std::domain_error
/// when both weights are zero.
double entropy(ClassWeights w);

/// Label minimizing expected cost when a false negative (adult labeled safe)
/// costs `fn_cost` and a false positive costs 1. Ties go to safe.
Label cost_label(ClassWeights w, double fn_cost);

using AttributeSet = std::bitset<kAttributeCount>;

/// Non-owning view of a weighted training table.
struct WeightedRows {
    std::span<const FeatureVector> features;
    std::span<const Label> labels;
    std::span<const double> weights;

    std::size_t size() const { return features.size(); }
};

struct Split {
    std::size_t attribute = 0;
    double threshold = 0.0;
    double gain = 0.0;
    double gain_ratio = 0.0;
};

/// Gains at or below this are treated as zero; also the tie tolerance when
/// ranking candidates.
inline constexpr double kGainEpsilon = 1e-12;

/// Relative slack on the min_leaf_weight test.
inline constexpr double kWeightTolerance = 1e-9;

/// C4.5 split search over rows `subset` of `rows`.
///
/// Candidates are midpoints between consecutive distinct values of each
/// attribute whose two sides both weigh at least `min_leaf_weight` (within
/// kWeightTolerance) and whose information gain is positive. Among candidates
/// with gain at least the mean candidate gain, the highest gain ratio wins;
/// ties go to the higher gain, then the lexicographically smaller attribute
/// name, then the lower threshold.
std::optional<Split> best_split(const WeightedRows& rows, std::span<const std::size_t> subset,
                                const AttributeSet& attributes, double min_leaf_weight);

/// Binary threshold tree stored flat in pre-order; node 0 is the root.
class Tree {
public:
    struct Node {
        static constexpr std::uint32_t kLeaf = UINT32_MAX;

        std::uint32_t attribute = kLeaf;
        double threshold = 0.0;
        std::uint32_t left = 0;   // fv[attribute] <= threshold
        std::uint32_t right = 0;  // fv[attribute] > threshold
        Label label = Label::safe;
        ClassWeights weights;

        bool is_leaf() const { return attribute == kLeaf; }
        friend bool operator==(const Node&, const Node&) = default;
    };

    static Tree leaf(Label label, ClassWeights weights = {});

    /// Appends a node and returns its index; children are wired by the caller.
    std::uint32_t add(const Node& node);
    Node& node(std::uint32_t i) { return nodes_[i]; }
    const Node& node(std::uint32_t i) const { return nodes_[i]; }
    const std::vector<Node>& nodes() const { return nodes_; }

    std::size_t size() const { return nodes_.size(); }
    std::size_t depth() const;

    /// Every attribute tested somewhere in the tree.
    AttributeSet attributes_used() const;

    friend bool operator==(const Tree&, const Tree&) = default;

private:
    std::vector<Node> nodes_;
};

struct TreeDecision {
    Label label = Label::safe;
    AttributeSet visited;
};

TreeDecision tree_classify(const Tree& tree, const FeatureVector& fv);

struct Forest {
    std::vector<Tree> trees;
    /// Adult iff the fraction of adult votes is strictly above this.
    double vote_threshold = 0.5;
    /// When set, replaces the fraction rule: adult iff adult votes >= this.
    std::optional<std::size_t> min_adult_votes;

    friend bool operator==(const Forest&, const Forest&) = default;
};

std::size_t adult_votes(const Forest& forest, const FeatureVector& fv);
double forest_score(const Forest& forest, const FeatureVector& fv);
Label classify(const Forest& forest, const FeatureVector& fv);

struct TrainConfig {
    std::size_t n_trees = 10;
    double fn_cost = 20.0;
    double min_leaf_weight = 2.0;
    std::size_t max_depth = 12;
    std::uint64_t rng_seed = 1;

    /// Throws ConfigError on an out-of-range field.
    void validate() const;
};

struct TrainReport {
    struct TreeStats {
        std::size_t size = 0;
        double training_error = 0.0;
    };
    std::vector<TreeStats> trees;
    double global_training_error = 0.0;
};

/// Recursive induction. Weights are used as given; leaf labels follow
/// cost_label with config.fn_cost.
Tree grow_tree(const WeightedRows& rows, const TrainConfig& config);

struct TrainResult {
    Forest forest;
    TrainReport report;
};

/// Cost-sensitive boosting. Adult rows start at fn_cost times the weight of
/// safe rows; weights are kept normalized to sum to the row count so that
/// min_leaf_weight reads in row units.
///
/// Throws TrainingError("degenerate class distribution") unless both classes
/// are present.
TrainResult train_forest(std::span<const FeatureVector> features, std::span<const Label> labels,
                         const TrainConfig& config);

} // namespace safeindex
