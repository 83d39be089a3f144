#include "safeindex/eval.hpp"

#include "safeindex/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <vector>

namespace safeindex {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

ConfusionMatrix score_run(std::span<const ScoredPair> run) {
    ConfusionMatrix cm;
    for (const auto& [gold, predicted] : run) {
        if (!gold) throw DataError("score_run: unlabeled entry");
        if (*gold == Label::adult) ++(predicted == Label::adult ? cm.tp : cm.fn);
        else ++(predicted == Label::adult ? cm.fp : cm.tn);
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    // Accuracy as 1 - error rate, so the two always agree bit for bit.
    std::optional<double> accuracy;
    if (const auto err = ratio(cm.fn + cm.fp, cm.total())) accuracy = 1.0 - *err;
    return {ratio(cm.fn, cm.tp + cm.fn), accuracy, ratio(cm.tp, cm.tp + cm.fn), ratio(cm.tp, cm.tp + cm.fp)};
}

double round_to(double value, int digits) {
    const double scale = std::pow(10.0, digits);
    return std::round(value * scale) / scale;
}

double round_significant(double value, int digits) {
    if (value == 0.0 || !std::isfinite(value)) return value;
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
    return round_to(value, digits - 1 - magnitude);
}

std::string format_confusion(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "   (a)    (b)   <- classified as\n"
        << "------ ------\n"
        << std::setw(6) << cm.tp << ' ' << std::setw(6) << cm.fn << "   (a): class adult\n"
        << std::setw(6) << cm.fp << ' ' << std::setw(6) << cm.tn << "   (b): class safe\n";
    return out.str();
}

std::string metrics_json(const ConfusionMatrix& cm) {
    const auto m = metrics(cm);
    nlohmann::ordered_json j;
    j["tp"] = cm.tp;
    j["fn"] = cm.fn;
    j["fp"] = cm.fp;
    j["tn"] = cm.tn;
    const std::pair<const char*, std::optional<double>> fields[] = {
        {"miss_rate", m.miss_rate}, {"accuracy", m.accuracy}, {"recall", m.recall}, {"precision", m.precision}};
    for (const auto& [name, value] : fields) {
        if (value) j[name] = round_significant(*value);
        else j[name] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::array<double, kAttributeCount> attribute_usage(const Forest& forest, std::span<const FeatureVector> vectors) {
    std::array<std::size_t, kAttributeCount> hits{};
    for (const auto& fv : vectors) {
        AttributeSet visited;
        for (const auto& tree : forest.trees) visited |= tree_classify(tree, fv).visited;
        for (std::size_t a = 0; a < kAttributeCount; ++a) {
            if (visited.test(a)) ++hits[a];
        }
    }
    std::array<double, kAttributeCount> usage{};
    if (vectors.empty()) return usage;
    for (std::size_t a = 0; a < kAttributeCount; ++a) {
        usage[a] = static_cast<double>(hits[a]) / static_cast<double>(vectors.size());
    }
    return usage;
}

std::string format_attribute_usage(const std::array<double, kAttributeCount>& usage) {
    std::vector<std::size_t> order;
    for (std::size_t a = 0; a < kAttributeCount; ++a) {
        if (usage[a] > 0.0) order.push_back(a);
    }
    const auto& names = attribute_names();
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (usage[x] != usage[y]) return usage[x] > usage[y];
        return names[x] < names[y];
    });
    std::ostringstream out;
    for (auto a : order) {
        out << std::setw(6) << std::fixed << std::setprecision(1) << usage[a] * 100.0 << "%  " << names[a] << '\n';
    }
    return out.str();
}

} // namespace safeindex
