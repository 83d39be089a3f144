#include "safeindex/model.hpp"

#include "safeindex/error.hpp"
#include "safeindex/io.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace safeindex {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json node_to_json(const Tree& tree, std::uint32_t i) {
    const auto& n = tree.node(i);
    ordered_json j;
    if (n.is_leaf()) {
        j["label"] = std::string(to_string(n.label));
        j["weights"] = {n.weights.adult, n.weights.safe};
        return j;
    }
    j["attr"] = attribute_names()[n.attribute];
    j["thr"] = n.threshold;
    j["left"] = node_to_json(tree, n.left);
    j["right"] = node_to_json(tree, n.right);
    return j;
}

std::uint32_t node_from_json(const ordered_json& j, Tree& tree, std::size_t depth) {
    if (depth > 256) throw DataError("model: tree too deep");
    if (!j.is_object()) throw DataError("model: tree node must be an object");
    Tree::Node node;
    if (j.contains("label")) {
        const auto label = j.at("label").get<std::string>();
        if (label == "adult") node.label = Label::adult;
        else if (label == "safe") node.label = Label::safe;
        else throw DataError("model: bad leaf label '" + label + "'");
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            if (!w.is_array() || w.size() != 2) throw DataError("model: leaf weights must be [adult, safe]");
            node.weights = {w[0].get<double>(), w[1].get<double>()};
        }
        return tree.add(node);
    }
    const auto name = j.at("attr").get<std::string>();
    const auto attr = attribute_index(name);
    if (!attr) throw DataError("model: unknown attribute '" + name + "'");
    node.attribute = static_cast<std::uint32_t>(*attr);
    node.threshold = j.at("thr").get<double>();
    if (!std::isfinite(node.threshold)) throw DataError("model: non-finite threshold");
    const auto self = tree.add(node);
    const auto l = node_from_json(j.at("left"), tree, depth + 1);
    const auto r = node_from_json(j.at("right"), tree, depth + 1);
    tree.node(self).left = l;
    tree.node(self).right = r;
    return self;
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

void render(const Tree& tree, std::uint32_t i, const std::string& indent, std::string& out) {
    const auto& n = tree.node(i);
    const auto& name = attribute_names()[n.attribute];
    const std::pair<std::uint32_t, const char*> branches[] = {{n.left, " <= "}, {n.right, " > "}};
    for (const auto& [child, op] : branches) {
        const auto& c = tree.node(child);
        out += indent + name + op + fmt(n.threshold) + ":";
        if (c.is_leaf()) {
            out += " " + std::string(to_string(c.label)) + " [a=" + fmt(c.weights.adult) + " s=" + fmt(c.weights.safe) + "]\n";
        } else {
            out += "\n";
            render(tree, child, indent + "|   ", out);
        }
    }
}

} // namespace

std::string serialize_forest(const Forest& forest) {
    ordered_json doc;
    doc["version"] = kModelVersion;
    doc["vote_threshold"] = forest.vote_threshold;
    if (forest.min_adult_votes) doc["min_adult_votes"] = *forest.min_adult_votes;
    doc["trees"] = ordered_json::array();
    for (const auto& t : forest.trees) doc["trees"].push_back(node_to_json(t, 0));
    return doc.dump(2) + "\n";
}

Forest deserialize_forest(std::string_view json) {
    try {
        const auto doc = ordered_json::parse(json);
        if (doc.at("version").get<int>() != kModelVersion) {
            throw DataError("model: unsupported version " + doc.at("version").dump());
        }
        Forest forest;
        forest.vote_threshold = doc.at("vote_threshold").get<double>();
        if (!(forest.vote_threshold > 0.0 && forest.vote_threshold <= 1.0)) {
            throw DataError("model: vote_threshold must be in (0, 1]");
        }
        if (doc.contains("min_adult_votes")) forest.min_adult_votes = doc.at("min_adult_votes").get<std::size_t>();
        if (!doc.at("trees").is_array()) throw DataError("model: trees must be an array");
        for (const auto& t : doc.at("trees")) {
            Tree tree;
            node_from_json(t, tree, 0);
            forest.trees.push_back(std::move(tree));
        }
        if (forest.trees.empty()) throw DataError("model: no trees");
        return forest;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model: ") + e.what());
    }
}

void save_forest(const Forest& forest, const std::filesystem::path& path) {
    write_file(path, serialize_forest(forest));
}

Forest load_forest(const std::filesystem::path& path) { return deserialize_forest(read_file(path)); }

std::string render_tree(const Tree& tree) {
    if (tree.size() == 0) return {};
    const auto& root = tree.node(0);
    if (root.is_leaf()) {
        return std::string(to_string(root.label)) + " [a=" + fmt(root.weights.adult) + " s=" + fmt(root.weights.safe) + "]\n";
    }
    std::string out;
    render(tree, 0, "", out);
    return out;
}

} // namespace safeindex
