#pragma once

#include "safeindex/forest.hpp"
#include "safeindex/page.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace safeindex {

/// Adult is the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;  // adult classified adult
    std::size_t fn = 0;  // adult classified safe
    std::size_t fp = 0;  // safe classified adult
    std::size_t tn = 0;  // safe classified safe

    std::size_t total() const { return tp + fn + fp + tn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ScoredPair {
    std::optional<Label> gold;
    Label predicted;
};

/// Throws DataError if any entry lacks a gold label.
ConfusionMatrix score_run(std::span<const ScoredPair> run);

/// Each metric is absent when its denominator is zero.
struct Metrics {
    std::optional<double> miss_rate;
    std::optional<double> accuracy;
    std::optional<double> recall;
    std::optional<double> precision;
};

Metrics metrics(const ConfusionMatrix& cm);

/// Rounds to `digits` decimals (half away from zero).
double round_to(double value, int digits);

/// Rounds to 4 significant digits.
double round_significant(double value, int digits = 4);

/// Two-by-two layout with adult as row/column (a), safe as (b).
std::string format_confusion(const ConfusionMatrix& cm);

/// JSON {tp, fn, fp, tn, miss_rate, accuracy, recall, precision}; absent
/// metrics are null, present ones rounded to 4 significant digits.
std::string metrics_json(const ConfusionMatrix& cm);

/// For each attribute, the fraction of vectors for which at least one tree's
/// classification path tested it. All zeros for an empty input.
std::array<double, kAttributeCount> attribute_usage(const Forest& forest, std::span<const FeatureVector> vectors);

/// Attributes with non-zero usage, most frequent first (ties by name).
std::string format_attribute_usage(const std::array<double, kAttributeCount>& usage);

} // namespace safeindex
